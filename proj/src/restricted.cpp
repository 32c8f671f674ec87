#include "remoteop/restricted.hpp"

#include <cmath>
#include <string>

#include "remoteop/error.hpp"
#include "remoteop/state.hpp"

namespace remoteop {

namespace {

double min_singular_value(const CMatrix &m) {
    const Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues().minCoeff();
}

void check_blocks(std::size_t n, std::size_t m, const Permutation &x, const std::vector<CMatrix> &blocks,
                  bool unitary_mode) {
    if (x.num_qubits() != n) {
        fail(ErrorKind::DimensionMismatch, "permutation acts on " + std::to_string(x.num_qubits()) +
                                               " qubits, expected " + std::to_string(n));
    }
    if (blocks.size() != (std::size_t{1} << n)) {
        fail(ErrorKind::DimensionMismatch, "expected " + std::to_string(std::size_t{1} << n) + " blocks");
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << m);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const CMatrix &g = blocks[i];
        if (g.rows() != dim || g.cols() != dim) {
            fail(ErrorKind::DimensionMismatch, "block " + std::to_string(i + 1) + " is not " + std::to_string(dim) +
                                                   "x" + std::to_string(dim));
        }
        if (!(min_singular_value(g) > tol::kRank)) {
            fail(ErrorKind::RankDeficientBlock, "block " + std::to_string(i + 1) + " is not full rank");
        }
        if (unitary_mode && !is_unitary(g)) {
            fail(ErrorKind::NonUnitary, "block " + std::to_string(i + 1) + " is not unitary");
        }
    }
}

std::vector<CMatrix> scalar_blocks(const std::vector<Complex> &t) {
    std::vector<CMatrix> blocks;
    blocks.reserve(t.size());
    for (Complex v : t) {
        blocks.push_back(CMatrix::Constant(1, 1, v));
    }
    return blocks;
}

Permutation hpv_permutation(Bit d) { return d ? Permutation({2, 1}) : Permutation::identity(1); }

} // namespace

RestrictedOp RestrictedOp::hpv(Bit d, std::array<Complex, 2> u, bool unitary_mode) {
    if (d > 1) {
        fail(ErrorKind::BadIndex, "HPV set index d must be 0 or 1");
    }
    RestrictedOp op(HpvOp{d, u}, unitary_mode);
    const HybridOp h = op.as_hybrid();
    check_blocks(1, 0, h.x, h.blocks, unitary_mode);
    return op;
}

RestrictedOp RestrictedOp::wang(Permutation x, std::vector<Complex> t, bool unitary_mode) {
    check_blocks(x.num_qubits(), 0, x, scalar_blocks(t), unitary_mode);
    return {WangOp{std::move(x), std::move(t)}, unitary_mode};
}

RestrictedOp RestrictedOp::hybrid(std::size_t n, std::size_t m, Permutation x, std::vector<CMatrix> blocks,
                                  bool unitary_mode) {
    check_blocks(n, m, x, blocks, unitary_mode);
    return {HybridOp{n, m, std::move(x), std::move(blocks)}, unitary_mode};
}

std::string_view RestrictedOp::name() const {
    switch (op_.index()) {
    case 0: return "hpv";
    case 1: return "wang";
    default: return "hybrid";
    }
}

std::size_t RestrictedOp::n() const {
    if (const auto *w = std::get_if<WangOp>(&op_)) {
        return w->x.num_qubits();
    }
    if (const auto *h = std::get_if<HybridOp>(&op_)) {
        return h->n;
    }
    return 1;
}

std::size_t RestrictedOp::m() const {
    if (const auto *h = std::get_if<HybridOp>(&op_)) {
        return h->m;
    }
    return 0;
}

Permutation RestrictedOp::permutation() const {
    if (const auto *p = std::get_if<HpvOp>(&op_)) {
        return hpv_permutation(p->d);
    }
    if (const auto *w = std::get_if<WangOp>(&op_)) {
        return w->x;
    }
    return std::get<HybridOp>(op_).x;
}

HybridOp RestrictedOp::as_hybrid() const {
    if (const auto *p = std::get_if<HpvOp>(&op_)) {
        // Column 1 of U(1) holds u10 and column 2 holds u01.
        const std::vector<Complex> t = p->d ? std::vector<Complex>{p->u[1], p->u[0]}
                                            : std::vector<Complex>{p->u[0], p->u[1]};
        return {1, 0, hpv_permutation(p->d), scalar_blocks(t)};
    }
    if (const auto *w = std::get_if<WangOp>(&op_)) {
        return {w->x.num_qubits(), 0, w->x, scalar_blocks(w->t)};
    }
    return std::get<HybridOp>(op_);
}

GateMatrix build(const RestrictedOp &op) {
    const HybridOp h = op.as_hybrid();
    const auto block_dim = static_cast<Eigen::Index>(std::size_t{1} << h.m);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << (h.n + h.m));
    GateMatrix out = GateMatrix::Zero(dim, dim);
    for (std::size_t col = 1; col <= h.x.size(); ++col) {
        const auto row = static_cast<Eigen::Index>(h.x(col) - 1);
        out.block(row * block_dim, static_cast<Eigen::Index>(col - 1) * block_dim, block_dim, block_dim) =
            h.blocks[col - 1];
    }
    return out;
}

Decomposition decompose(const GateMatrix &u, std::size_t n, std::size_t m) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << (n + m));
    if (u.rows() != dim || u.cols() != dim) {
        fail(ErrorKind::DimensionMismatch, "matrix is not 2^(N+M) square");
    }
    const std::size_t levels = std::size_t{1} << n;
    const auto block_dim = static_cast<Eigen::Index>(std::size_t{1} << m);

    std::vector<std::size_t> row_of_col(levels, 0);
    std::vector<std::size_t> nonzero_in_row(levels, 0);
    for (std::size_t c = 0; c < levels; ++c) {
        std::size_t found = 0;
        for (std::size_t r = 0; r < levels; ++r) {
            const double peak = u.block(static_cast<Eigen::Index>(r) * block_dim,
                                        static_cast<Eigen::Index>(c) * block_dim, block_dim, block_dim)
                                    .cwiseAbs()
                                    .maxCoeff();
            if (peak > tol::kAmbiguous && peak < tol::kZeroBlock) {
                fail(ErrorKind::AmbiguousStructure, "block (" + std::to_string(r + 1) + "," + std::to_string(c + 1) +
                                                        ") has magnitude inside the ambiguity band");
            }
            if (peak >= tol::kZeroBlock) {
                ++found;
                ++nonzero_in_row[r];
                row_of_col[c] = r;
            }
        }
        if (found != 1) {
            fail(ErrorKind::NotBlockPermutation,
                 "block column " + std::to_string(c + 1) + " has " + std::to_string(found) + " nonzero blocks");
        }
    }
    for (std::size_t r = 0; r < levels; ++r) {
        if (nonzero_in_row[r] != 1) {
            fail(ErrorKind::NotBlockPermutation, "block row " + std::to_string(r + 1) + " has " +
                                                     std::to_string(nonzero_in_row[r]) + " nonzero blocks");
        }
    }

    Decomposition d;
    d.n = n;
    d.m = m;
    std::vector<std::size_t> map(levels);
    for (std::size_t c = 0; c < levels; ++c) {
        map[c] = row_of_col[c] + 1;
        CMatrix g = u.block(static_cast<Eigen::Index>(row_of_col[c]) * block_dim,
                            static_cast<Eigen::Index>(c) * block_dim, block_dim, block_dim);
        if (!(min_singular_value(g) > tol::kRank)) {
            fail(ErrorKind::RankDeficientBlock, "block for column " + std::to_string(c + 1) + " is not full rank");
        }
        d.blocks.push_back(std::move(g));
    }
    d.x = Permutation(std::move(map));
    d.ebit_cost = n + 2 * m;
    return d;
}

std::vector<Decomposition> classify(const GateMatrix &u) {
    std::size_t total = 0;
    while ((Eigen::Index{1} << total) < u.rows()) {
        ++total;
    }
    if (u.rows() != u.cols() || (Eigen::Index{1} << total) != u.rows() || total == 0) {
        fail(ErrorKind::DimensionMismatch, "matrix dimension is not a power of two");
    }
    if (!is_unitary(u)) {
        fail(ErrorKind::NonUnitary, "classify expects a unitary matrix");
    }
    std::vector<Decomposition> found;
    for (std::size_t n = total + 1; n-- > 0;) {
        try {
            found.push_back(decompose(u, n, total - n));
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::NotBlockPermutation && e.kind() != ErrorKind::AmbiguousStructure) {
                throw;
            }
        }
    }
    return found;
}

RestrictedOp to_restricted_op(const Decomposition &d, bool unitary_mode) {
    return RestrictedOp::hybrid(d.n, d.m, d.x, d.blocks, unitary_mode);
}

} // namespace remoteop
