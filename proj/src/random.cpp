#include "remoteop/random.hpp"

#include <cmath>
#include <numbers>

namespace remoteop::random {

namespace {

Complex gaussian(Engine &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

CMatrix ginibre(std::size_t dim, Engine &rng) {
    const auto d = static_cast<Eigen::Index>(dim);
    CMatrix z(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            z(r, c) = gaussian(rng);
        }
    }
    return z;
}

} // namespace

StateVector state(std::size_t num_qubits, Engine &rng) {
    std::vector<Complex> amps(std::size_t{1} << num_qubits);
    for (Complex &a : amps) {
        a = gaussian(rng);
    }
    return StateVector::normalized(num_qubits, std::move(amps));
}

CMatrix unitary(std::size_t dim, Engine &rng) {
    const CMatrix z = ginibre(dim, rng);
    const Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
        const Complex diag = r(i, i);
        if (std::abs(diag) > 0.0) {
            q.col(i) *= diag / std::abs(diag);
        }
    }
    return q;
}

CMatrix full_rank(std::size_t dim, Engine &rng) {
    // Shift away from singularity; a Ginibre draw is full rank almost surely,
    // the identity term bounds the smallest singular value in practice.
    return ginibre(dim, rng) + 2.0 * std::sqrt(static_cast<double>(dim)) * CMatrix::Identity(
                                                                              static_cast<Eigen::Index>(dim),
                                                                              static_cast<Eigen::Index>(dim));
}

Complex phase(Engine &rng) {
    const double theta = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    return std::polar(1.0, theta);
}

Permutation permutation(std::size_t num_qubits, Engine &rng) {
    std::vector<std::size_t> map(std::size_t{1} << num_qubits);
    for (std::size_t i = 0; i < map.size(); ++i) {
        map[i] = i + 1;
    }
    for (std::size_t i = map.size(); i > 1; --i) {
        const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        std::swap(map[i - 1], map[j]);
    }
    return Permutation(std::move(map));
}

DensityMatrix density(std::size_t num_qubits, std::size_t rank, Engine &rng) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
    CMatrix rho = CMatrix::Zero(dim, dim);
    std::uniform_real_distribution<double> weight(0.1, 1.0);
    double total = 0.0;
    for (std::size_t k = 0; k < rank; ++k) {
        const CVector v = state(num_qubits, rng).to_eigen();
        const double w = weight(rng);
        rho += w * v * v.adjoint();
        total += w;
    }
    rho /= total;
    rho = (0.5 * (rho + rho.adjoint())).eval();
    return {num_qubits, rho};
}

RestrictedOp hpv_op(Bit d, Engine &rng) {
    const Complex u0 = phase(rng);
    const Complex u1 = phase(rng);
    return RestrictedOp::hpv(d, {u0, u1});
}

RestrictedOp wang_op(const Permutation &x, Engine &rng) {
    std::vector<Complex> t(x.size());
    for (Complex &v : t) {
        v = phase(rng);
    }
    return RestrictedOp::wang(x, std::move(t));
}

RestrictedOp wang_op(std::size_t n, Engine &rng) {
    const Permutation x = permutation(n, rng);
    return wang_op(x, rng);
}

RestrictedOp hybrid_op(std::size_t n, std::size_t m, Engine &rng, bool unitary_mode) {
    Permutation x = permutation(n, rng);
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
        blocks.push_back(unitary_mode ? unitary(std::size_t{1} << m, rng) : full_rank(std::size_t{1} << m, rng));
    }
    return RestrictedOp::hybrid(n, m, std::move(x), std::move(blocks), unitary_mode);
}

} // namespace remoteop::random
