#pragma once

// Independent oracles used by the unit and acceptance tests. Nothing here
// calls into the kernels it is meant to check.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "remoteop/state.hpp"

namespace remoteop::testing {

/// 2^n x 2^n matrix of `gate` acting on `targets` and identity elsewhere,
/// built entry by entry.
inline CMatrix embedded_matrix(const CMatrix &gate, const QubitList &targets, std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    std::size_t target_mask = 0;
    for (Qubit q : targets) {
        target_mask |= std::size_t{1} << (n - 1 - q);
    }
    auto local = [&](std::size_t i) {
        std::size_t j = 0;
        for (Qubit q : targets) {
            j = (j << 1) | ((i >> (n - 1 - q)) & 1U);
        }
        return j;
    };
    CMatrix full = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if ((r & ~target_mask) == (c & ~target_mask)) {
                full(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    gate(static_cast<Eigen::Index>(local(r)), static_cast<Eigen::Index>(local(c)));
            }
        }
    }
    return full;
}

inline CMatrix projector(Bit bit) {
    CMatrix p = CMatrix::Zero(2, 2);
    p(bit, bit) = 1.0;
    return p;
}

inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Marginal probabilities of `qubits` by summing |amplitude|^2 over every
/// register index.
inline std::vector<double> marginal(const StateVector &s, const QubitList &qubits) {
    std::vector<double> p(std::size_t{1} << qubits.size(), 0.0);
    const std::size_t n = s.num_qubits();
    for (std::size_t i = 0; i < s.dim(); ++i) {
        std::size_t k = 0;
        for (Qubit q : qubits) {
            k = (k << 1) | ((i >> (n - 1 - q)) & 1U);
        }
        p[k] += std::norm(s[i]);
    }
    return p;
}

inline CVector as_vector(const StateVector &s) { return s.to_eigen(); }

template <class A, class B>
double max_abs_diff(const Eigen::MatrixBase<A> &a, const Eigen::MatrixBase<B> &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline StateVector from_eigen(const CVector &v) {
    std::size_t n = 0;
    while ((Eigen::Index{1} << n) < v.size()) {
        ++n;
    }
    return StateVector::normalized(n, std::vector<Complex>(v.data(), v.data() + v.size()));
}

} // namespace remoteop::testing
