#include "remoteop/kernels.hpp"

#include <algorithm>
#include <cassert>

#include <omp.h>

namespace remoteop::kernels {

namespace {

struct TargetMasks {
    std::vector<std::size_t> sorted_positions; // ascending bit positions
    std::vector<std::size_t> offsets;          // offsets[j] = bits of gate index j scattered
    std::size_t mask = 0;
};

TargetMasks make_masks(std::size_t num_qubits, std::span<const Qubit> targets) {
    TargetMasks m;
    const std::size_t k = targets.size();
    std::vector<std::size_t> positions(k);
    for (std::size_t t = 0; t < k; ++t) {
        positions[t] = num_qubits - 1 - targets[t];
        m.mask |= std::size_t{1} << positions[t];
    }
    m.offsets.assign(std::size_t{1} << k, 0);
    for (std::size_t j = 0; j < m.offsets.size(); ++j) {
        std::size_t off = 0;
        for (std::size_t t = 0; t < k; ++t) {
            if ((j >> (k - 1 - t)) & 1U) {
                off |= std::size_t{1} << positions[t];
            }
        }
        m.offsets[j] = off;
    }
    m.sorted_positions = positions;
    std::sort(m.sorted_positions.begin(), m.sorted_positions.end());
    return m;
}

inline std::size_t insert_zero_bits(std::size_t group, const std::vector<std::size_t> &sorted_positions) {
    for (std::size_t pos : sorted_positions) {
        const std::size_t low = group & ((std::size_t{1} << pos) - 1);
        group = ((group >> pos) << (pos + 1)) | low;
    }
    return group;
}

} // namespace

void apply_matrix(std::span<Complex> amps, std::size_t num_qubits, const CMatrix &gate,
                  std::span<const Qubit> targets) {
    const TargetMasks masks = make_masks(num_qubits, targets);
    const std::size_t dim = masks.offsets.size();
    assert(static_cast<std::size_t>(gate.rows()) == dim);
    const auto groups = static_cast<std::ptrdiff_t>(amps.size() / dim);
    const bool parallel = amps.size() >= kParallelMinAmplitudes;

#pragma omp parallel if (parallel)
    {
        std::vector<Complex> in(dim);
#pragma omp for schedule(static)
        for (std::ptrdiff_t g = 0; g < groups; ++g) {
            const std::size_t base = insert_zero_bits(static_cast<std::size_t>(g), masks.sorted_positions);
            for (std::size_t j = 0; j < dim; ++j) {
                in[j] = amps[base | masks.offsets[j]];
            }
            for (std::size_t r = 0; r < dim; ++r) {
                Complex acc{0.0, 0.0};
                for (std::size_t c = 0; c < dim; ++c) {
                    acc += gate(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
                }
                amps[base | masks.offsets[r]] = acc;
            }
        }
    }
}

std::vector<double> outcome_weights(std::span<const Complex> amps, std::size_t num_qubits,
                                    std::span<const Qubit> targets) {
    const TargetMasks masks = make_masks(num_qubits, targets);
    const std::size_t dim = masks.offsets.size();
    const auto groups = static_cast<std::ptrdiff_t>(amps.size() / dim);
    const bool parallel = amps.size() >= kParallelMinAmplitudes;
    std::vector<double> weights(dim, 0.0);

#pragma omp parallel if (parallel)
    {
        std::vector<double> local(dim, 0.0);
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t g = 0; g < groups; ++g) {
            const std::size_t base = insert_zero_bits(static_cast<std::size_t>(g), masks.sorted_positions);
            for (std::size_t j = 0; j < dim; ++j) {
                local[j] += std::norm(amps[base | masks.offsets[j]]);
            }
        }
#pragma omp critical
        for (std::size_t j = 0; j < dim; ++j) {
            weights[j] += local[j];
        }
    }
    return weights;
}

double project(std::span<Complex> amps, std::size_t num_qubits, std::span<const Qubit> targets,
               std::size_t outcome) {
    const TargetMasks masks = make_masks(num_qubits, targets);
    const std::size_t keep = masks.offsets[outcome];
    const auto size = static_cast<std::ptrdiff_t>(amps.size());
    const bool parallel = amps.size() >= kParallelMinAmplitudes;
    double kept = 0.0;
#pragma omp parallel for if (parallel) reduction(+ : kept) schedule(static)
    for (std::ptrdiff_t i = 0; i < size; ++i) {
        auto &a = amps[static_cast<std::size_t>(i)];
        if ((static_cast<std::size_t>(i) & masks.mask) == keep) {
            kept += std::norm(a);
        } else {
            a = Complex{0.0, 0.0};
        }
    }
    return kept;
}

Complex inner_product(std::span<const Complex> bra, std::span<const Complex> ket) {
    assert(bra.size() == ket.size());
    const auto size = static_cast<std::ptrdiff_t>(bra.size());
    const bool parallel = bra.size() >= kParallelMinAmplitudes;
    double re = 0.0;
    double im = 0.0;
#pragma omp parallel for if (parallel) reduction(+ : re, im) schedule(static)
    for (std::ptrdiff_t i = 0; i < size; ++i) {
        const Complex term = std::conj(bra[static_cast<std::size_t>(i)]) * ket[static_cast<std::size_t>(i)];
        re += term.real();
        im += term.imag();
    }
    return {re, im};
}

double norm_squared(std::span<const Complex> amps) {
    const auto size = static_cast<std::ptrdiff_t>(amps.size());
    const bool parallel = amps.size() >= kParallelMinAmplitudes;
    double total = 0.0;
#pragma omp parallel for if (parallel) reduction(+ : total) schedule(static)
    for (std::ptrdiff_t i = 0; i < size; ++i) {
        total += std::norm(amps[static_cast<std::size_t>(i)]);
    }
    return total;
}

void scale(std::span<Complex> amps, double factor) {
    const auto size = static_cast<std::ptrdiff_t>(amps.size());
    const bool parallel = amps.size() >= kParallelMinAmplitudes;
#pragma omp parallel for if (parallel) schedule(static)
    for (std::ptrdiff_t i = 0; i < size; ++i) {
        amps[static_cast<std::size_t>(i)] *= factor;
    }
}

namespace reference {

namespace {

// Gate-local index of a register index: bit t of the result (counting from
// the most significant) is the value of qubit targets[t].
std::size_t gate_index(std::size_t index, std::size_t num_qubits, std::span<const Qubit> targets) {
    std::size_t j = 0;
    for (Qubit q : targets) {
        j = (j << 1) | ((index >> (num_qubits - 1 - q)) & 1U);
    }
    return j;
}

std::size_t with_gate_index(std::size_t index, std::size_t num_qubits, std::span<const Qubit> targets,
                            std::size_t j) {
    const std::size_t k = targets.size();
    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t pos = num_qubits - 1 - targets[t];
        const std::size_t bit = (j >> (k - 1 - t)) & 1U;
        index = (index & ~(std::size_t{1} << pos)) | (bit << pos);
    }
    return index;
}

} // namespace

void apply_matrix(std::span<Complex> amps, std::size_t num_qubits, const CMatrix &gate,
                  std::span<const Qubit> targets) {
    const std::vector<Complex> in(amps.begin(), amps.end());
    const std::size_t dim = std::size_t{1} << targets.size();
    for (std::size_t i = 0; i < in.size(); ++i) {
        const std::size_t row = gate_index(i, num_qubits, targets);
        Complex acc{0.0, 0.0};
        for (std::size_t col = 0; col < dim; ++col) {
            acc += gate(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) *
                   in[with_gate_index(i, num_qubits, targets, col)];
        }
        amps[i] = acc;
    }
}

std::vector<double> outcome_weights(std::span<const Complex> amps, std::size_t num_qubits,
                                    std::span<const Qubit> targets) {
    std::vector<double> weights(std::size_t{1} << targets.size(), 0.0);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        weights[gate_index(i, num_qubits, targets)] += std::norm(amps[i]);
    }
    return weights;
}

Complex inner_product(std::span<const Complex> bra, std::span<const Complex> ket) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < bra.size(); ++i) {
        acc += std::conj(bra[i]) * ket[i];
    }
    return acc;
}

} // namespace reference

} // namespace remoteop::kernels
