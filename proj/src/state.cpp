#include "remoteop/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "remoteop/kernels.hpp"

namespace remoteop {

namespace {

std::size_t checked_dim(std::size_t num_qubits) {
    if (num_qubits == 0 || num_qubits > 30) {
        fail(ErrorKind::DimensionMismatch, "unsupported qubit count " + std::to_string(num_qubits));
    }
    return std::size_t{1} << num_qubits;
}

void check_targets(std::size_t num_qubits, std::span<const Qubit> targets) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] >= num_qubits) {
            fail(ErrorKind::TargetOutOfRange,
                 "qubit " + std::to_string(targets[i]) + " outside register of " + std::to_string(num_qubits));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (targets[i] == targets[j]) {
                fail(ErrorKind::TargetOutOfRange, "repeated target qubit " + std::to_string(targets[i]));
            }
        }
    }
}

} // namespace

StateVector::StateVector(std::size_t num_qubits, std::vector<Complex> amps)
    : num_qubits_(num_qubits), amps_(std::move(amps)) {
    if (amps_.size() != checked_dim(num_qubits)) {
        fail(ErrorKind::DimensionMismatch, "expected " + std::to_string(std::size_t{1} << num_qubits) +
                                               " amplitudes, got " + std::to_string(amps_.size()));
    }
    const double norm = kernels::norm_squared(amps_);
    if (std::abs(norm - 1.0) > tol::kState) {
        fail(ErrorKind::DimensionMismatch, "state not normalized (squared norm " + std::to_string(norm) + ")");
    }
}

StateVector StateVector::normalized(std::size_t num_qubits, std::vector<Complex> amps) {
    return StateBuilder(num_qubits, std::move(amps)).finish_renormalized();
}

StateVector StateVector::basis(std::size_t num_qubits, std::size_t index) {
    std::vector<Complex> amps(checked_dim(num_qubits));
    if (index >= amps.size()) {
        fail(ErrorKind::BadIndex, "basis index " + std::to_string(index) + " out of range");
    }
    amps[index] = 1.0;
    return {Unchecked{}, num_qubits, std::move(amps)};
}

CVector StateVector::to_eigen() const {
    return Eigen::Map<const CVector>(amps_.data(), static_cast<Eigen::Index>(amps_.size()));
}

StateVector StateBuilder::finish() && { return {num_qubits_, std::move(amps_)}; }

StateVector StateBuilder::finish_renormalized() && {
    if (amps_.size() != checked_dim(num_qubits_)) {
        fail(ErrorKind::DimensionMismatch, "amplitude count does not match qubit count");
    }
    const double norm = kernels::norm_squared(amps_);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        fail(ErrorKind::DimensionMismatch, "cannot normalize a zero or non-finite vector");
    }
    kernels::scale(amps_, 1.0 / std::sqrt(norm));
    return {StateVector::Unchecked{}, num_qubits_, std::move(amps_)};
}

DensityMatrix::DensityMatrix(std::size_t num_qubits, CMatrix entries)
    : num_qubits_(num_qubits), entries_(std::move(entries)) {
    const auto dim = static_cast<Eigen::Index>(checked_dim(num_qubits));
    if (entries_.rows() != dim || entries_.cols() != dim) {
        fail(ErrorKind::DimensionMismatch, "density matrix shape does not match qubit count");
    }
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > tol::kState) {
        fail(ErrorKind::DimensionMismatch, "density matrix is not Hermitian");
    }
    if (std::abs(entries_.trace() - Complex{1.0, 0.0}) > tol::kState) {
        fail(ErrorKind::DimensionMismatch, "density matrix trace differs from 1");
    }
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(entries_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -tol::kPsdFloor) {
        fail(ErrorKind::DimensionMismatch, "density matrix is not positive semidefinite");
    }
}

bool DensityMatrix::is_pure(double tol) const {
    const double purity = (entries_ * entries_).trace().real();
    return std::abs(purity - 1.0) < tol;
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    std::vector<Complex> out(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            out[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return StateBuilder(a.num_qubits() + b.num_qubits(), std::move(out)).finish();
}

bool is_unitary(const CMatrix &m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    const CMatrix defect = m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols());
    return defect.cwiseAbs().maxCoeff() < tol;
}

StateVector apply_gate(const StateVector &state, const CMatrix &gate, std::span<const Qubit> targets,
                       GateCheck check) {
    check_targets(state.num_qubits(), targets);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << targets.size());
    if (targets.empty() || gate.rows() != dim || gate.cols() != dim) {
        fail(ErrorKind::DimensionMismatch, "gate of size " + std::to_string(gate.rows()) + " on " +
                                               std::to_string(targets.size()) + " targets");
    }
    if (check == GateCheck::Unitary && !is_unitary(gate)) {
        fail(ErrorKind::NonUnitaryGate, "gate fails the unitarity check");
    }
    StateBuilder out(state);
    kernels::apply_matrix(out.amplitudes(), state.num_qubits(), gate, targets);
    return check == GateCheck::Unitary ? std::move(out).finish() : std::move(out).finish_renormalized();
}

std::size_t bits_to_index(const Bits &bits) {
    std::size_t index = 0;
    for (Bit b : bits) {
        index = (index << 1) | (b & 1U);
    }
    return index;
}

Bits index_to_bits(std::size_t index, std::size_t width) {
    Bits bits(width);
    for (std::size_t i = 0; i < width; ++i) {
        bits[i] = static_cast<Bit>((index >> (width - 1 - i)) & 1U);
    }
    return bits;
}

namespace {

Branch branch_for(const StateVector &state, std::span<const Qubit> qubits, std::size_t outcome, double probability) {
    StateBuilder post(state);
    kernels::project(post.amplitudes(), state.num_qubits(), qubits, outcome);
    return Branch{index_to_bits(outcome, qubits.size()), probability, std::move(post).finish_renormalized()};
}

// Outcomes lighter than this are numerically impossible rather than rare.
constexpr double kImpossibleOutcome = 1e-24;

} // namespace

std::vector<Branch> measure(const StateVector &state, std::span<const Qubit> qubits) {
    check_targets(state.num_qubits(), qubits);
    const auto weights = kernels::outcome_weights(state.amplitudes(), state.num_qubits(), qubits);
    std::vector<Branch> branches;
    for (std::size_t outcome = 0; outcome < weights.size(); ++outcome) {
        if (weights[outcome] > kImpossibleOutcome) {
            branches.push_back(branch_for(state, qubits, outcome, weights[outcome]));
        }
    }
    return branches;
}

Branch project_outcome(const StateVector &state, std::span<const Qubit> qubits, const Bits &outcome) {
    check_targets(state.num_qubits(), qubits);
    if (outcome.size() != qubits.size()) {
        fail(ErrorKind::DimensionMismatch, "outcome width differs from measured qubit count");
    }
    const std::size_t index = bits_to_index(outcome);
    StateBuilder post(state);
    const double weight = kernels::project(post.amplitudes(), state.num_qubits(), qubits, index);
    if (weight <= kImpossibleOutcome) {
        fail(ErrorKind::ZeroProbabilityOutcome, "requested outcome has zero probability");
    }
    return Branch{outcome, weight, std::move(post).finish_renormalized()};
}

Branch sample_measure(const StateVector &state, std::span<const Qubit> qubits, std::uint64_t seed) {
    check_targets(state.num_qubits(), qubits);
    const auto weights = kernels::outcome_weights(state.amplitudes(), state.num_qubits(), qubits);
    std::mt19937_64 rng(seed);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    double cumulative = 0.0;
    std::size_t chosen = weights.size() - 1;
    for (std::size_t outcome = 0; outcome < weights.size(); ++outcome) {
        cumulative += weights[outcome];
        if (u < cumulative && weights[outcome] > kImpossibleOutcome) {
            chosen = outcome;
            break;
        }
    }
    while (weights[chosen] <= kImpossibleOutcome) {
        --chosen;
    }
    return branch_for(state, qubits, chosen, weights[chosen]);
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        fail(ErrorKind::DimensionMismatch, "fidelity between registers of different size");
    }
    return std::min(1.0, std::norm(kernels::inner_product(a.amplitudes(), b.amplitudes())));
}

double phase_aligned_deviation(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        fail(ErrorKind::DimensionMismatch, "comparing registers of different size");
    }
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < a.dim(); ++i) {
        if (std::abs(a[i]) > std::abs(a[pivot])) {
            pivot = i;
        }
    }
    Complex phase{1.0, 0.0};
    if (std::abs(b[pivot]) > 0.0) {
        const Complex ratio = a[pivot] / b[pivot];
        phase = ratio / std::abs(ratio);
    }
    double dev = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        dev = std::max(dev, std::abs(a[i] - phase * b[i]));
    }
    return dev;
}

namespace {

// Splits register indices into (kept, rest) coordinates.
struct Cut {
    std::vector<std::size_t> keep_index; // register index -> row
    std::vector<std::size_t> rest_index; // register index -> column
    std::size_t keep_dim = 0;
    std::size_t rest_dim = 0;
};

Cut make_cut(std::size_t num_qubits, std::span<const Qubit> keep) {
    check_targets(num_qubits, keep);
    std::vector<Qubit> rest;
    for (Qubit q = 0; q < num_qubits; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) {
            rest.push_back(q);
        }
    }
    Cut cut;
    const std::size_t dim = std::size_t{1} << num_qubits;
    cut.keep_dim = std::size_t{1} << keep.size();
    cut.rest_dim = std::size_t{1} << rest.size();
    cut.keep_index.resize(dim);
    cut.rest_index.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t k = 0;
        for (Qubit q : keep) {
            k = (k << 1) | ((i >> (num_qubits - 1 - q)) & 1U);
        }
        std::size_t r = 0;
        for (Qubit q : rest) {
            r = (r << 1) | ((i >> (num_qubits - 1 - q)) & 1U);
        }
        cut.keep_index[i] = k;
        cut.rest_index[i] = r;
    }
    return cut;
}

} // namespace

StateVector extract_subsystem(const StateVector &state, std::span<const Qubit> qubits) {
    const Cut cut = make_cut(state.num_qubits(), qubits);
    CMatrix mat = CMatrix::Zero(static_cast<Eigen::Index>(cut.keep_dim), static_cast<Eigen::Index>(cut.rest_dim));
    for (std::size_t i = 0; i < state.dim(); ++i) {
        mat(static_cast<Eigen::Index>(cut.keep_index[i]), static_cast<Eigen::Index>(cut.rest_index[i])) = state[i];
    }
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    mat.cwiseAbs().maxCoeff(&row, &col);
    const CVector kept = mat.col(col).normalized();
    const Eigen::RowVectorXcd rest = kept.adjoint() * mat;
    if ((mat - kept * rest).cwiseAbs().maxCoeff() > tol::kFidelity) {
        fail(ErrorKind::NotProductState, "subsystem is entangled with the rest of the register");
    }
    return StateVector::normalized(qubits.size(), std::vector<Complex>(kept.data(), kept.data() + kept.size()));
}

DensityMatrix to_density(const StateVector &s) {
    const CVector v = s.to_eigen();
    return {s.num_qubits(), v * v.adjoint()};
}

DensityMatrix apply_channel(const DensityMatrix &rho, const CMatrix &gate, std::span<const Qubit> targets) {
    check_targets(rho.num_qubits(), targets);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << targets.size());
    if (targets.empty() || gate.rows() != dim || gate.cols() != dim) {
        fail(ErrorKind::DimensionMismatch, "channel gate does not match its targets");
    }
    // U rho U^dag = (U (U rho)^dag)^dag, acting on columns with the kernel.
    auto left_apply = [&](CMatrix m) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            kernels::apply_matrix(std::span<Complex>(m.col(c).data(), static_cast<std::size_t>(m.rows())),
                                  rho.num_qubits(), gate, targets);
        }
        return m;
    };
    const CMatrix half = left_apply(rho.entries());
    CMatrix out = left_apply(half.adjoint()).adjoint();
    // Clean round-off so the result passes the Hermitian check.
    out = (0.5 * (out + out.adjoint())).eval();
    return {rho.num_qubits(), std::move(out)};
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const Qubit> keep) {
    const Cut cut = make_cut(rho.num_qubits(), keep);
    const auto kd = static_cast<Eigen::Index>(cut.keep_dim);
    CMatrix out = CMatrix::Zero(kd, kd);
    const std::size_t dim = std::size_t{1} << rho.num_qubits();
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if (cut.rest_index[i] == cut.rest_index[j]) {
                out(static_cast<Eigen::Index>(cut.keep_index[i]), static_cast<Eigen::Index>(cut.keep_index[j])) +=
                    rho.entries()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
    }
    return {keep.size(), std::move(out)};
}

namespace {

CMatrix psd_sqrt(const CMatrix &m) {
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(m);
    const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
}

} // namespace

double dm_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.num_qubits() != sigma.num_qubits()) {
        fail(ErrorKind::DimensionMismatch, "fidelity between registers of different size");
    }
    if (rho.is_pure() || sigma.is_pure()) {
        return std::clamp((rho.entries() * sigma.entries()).trace().real(), 0.0, 1.0);
    }
    const CMatrix root = psd_sqrt(rho.entries());
    const CMatrix inner = root * sigma.entries() * root;
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
    const double t = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(t * t, 0.0, 1.0);
}

} // namespace remoteop
