#include <gtest/gtest.h>

#include "remoteop/error.hpp"
#include "remoteop/random.hpp"
#include "remoteop/restricted.hpp"
#include "remoteop/state.hpp"
#include "test_support.hpp"

namespace remoteop {
namespace {

using testing::kron;
using testing::max_abs_diff;

ErrorKind kind_of(auto &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::ConfigError;
}

// Direct summation of sum_m |p_m><m| (x) G_m.
CMatrix sum_formula(const HybridOp &op) {
    const auto levels = static_cast<Eigen::Index>(op.x.size());
    const auto block = static_cast<Eigen::Index>(std::size_t{1} << op.m);
    CMatrix out = CMatrix::Zero(levels * block, levels * block);
    for (std::size_t m = 1; m <= op.x.size(); ++m) {
        CMatrix outer = CMatrix::Zero(levels, levels);
        outer(static_cast<Eigen::Index>(op.x(m) - 1), static_cast<Eigen::Index>(m - 1)) = 1.0;
        out += kron(outer, op.blocks[m - 1]);
    }
    return out;
}

TEST(Build, SingleBlockIsTheBlock) {
    random::Engine rng(1);
    const CMatrix v = random::unitary(4, rng);
    const RestrictedOp op = RestrictedOp::hybrid(0, 2, Permutation::identity(0), {v});
    EXPECT_LT(max_abs_diff(build(op), v), 1e-15);
}

TEST(Build, HpvAndWangMatchOneQubitSets) {
    const Complex u01{0.6, 0.8};
    const Complex u10{0.0, -1.0};
    CMatrix anti(2, 2);
    anti << 0, u01, u10, 0;
    EXPECT_LT(max_abs_diff(build(RestrictedOp::wang(Permutation({2, 1}), {u10, u01})), anti), 1e-15);
    EXPECT_LT(max_abs_diff(build(RestrictedOp::hpv(1, {u01, u10})), anti), 1e-15);

    const Complex u00 = std::polar(1.0, 0.3);
    const Complex u11 = std::polar(1.0, -1.1);
    CMatrix diag(2, 2);
    diag << u00, 0, 0, u11;
    EXPECT_LT(max_abs_diff(build(RestrictedOp::hpv(0, {u00, u11})), diag), 1e-15);
}

TEST(Build, HybridTwoByTwoBlocks) {
    random::Engine rng(2);
    const CMatrix g1 = random::unitary(2, rng);
    const CMatrix g2 = random::unitary(2, rng);
    const RestrictedOp op = RestrictedOp::hybrid(1, 1, Permutation({2, 1}), {g1, g2});
    const CMatrix u = build(op);
    EXPECT_LT(max_abs_diff(u.block(2, 0, 2, 2), g1), 1e-15);
    EXPECT_LT(max_abs_diff(u.block(0, 2, 2, 2), g2), 1e-15);
    EXPECT_LT(u.block(0, 0, 2, 2).cwiseAbs().maxCoeff(), 1e-300);
    EXPECT_LT(max_abs_diff(u, sum_formula(op.as_hybrid())), 1e-15);
}

TEST(Build, MatchesSumFormulaForRandomOps) {
    random::Engine rng(3);
    for (std::size_t n = 0; n <= 2; ++n) {
        for (std::size_t m = 0; m + n <= 3; ++m) {
            if (n + m == 0) {
                continue;
            }
            for (int rep = 0; rep < 5; ++rep) {
                const RestrictedOp op = random::hybrid_op(n, m, rng, rep % 2 == 0);
                EXPECT_LT(max_abs_diff(build(op), sum_formula(op.as_hybrid())), 1e-15);
            }
        }
    }
}

TEST(Build, UnitaryIffBlocksUnitary) {
    random::Engine rng(4);
    for (int rep = 0; rep < 20; ++rep) {
        const bool unitary_blocks = rep % 2 == 0;
        const RestrictedOp op = random::hybrid_op(2, 1, rng, unitary_blocks);
        EXPECT_EQ(is_unitary(build(op)), unitary_blocks);
    }
}

TEST(RestrictedOp, Validation) {
    CMatrix singular = CMatrix::Zero(2, 2);
    singular(0, 0) = 1.0;
    EXPECT_EQ(kind_of([&] {
                  RestrictedOp::hybrid(1, 1, Permutation({1, 2}), {CMatrix::Identity(2, 2), singular}, false);
              }),
              ErrorKind::RankDeficientBlock);
    CMatrix scaled = 2.0 * CMatrix::Identity(2, 2);
    EXPECT_EQ(kind_of([&] { RestrictedOp::hybrid(1, 1, Permutation({1, 2}), {scaled, scaled}); }),
              ErrorKind::NonUnitary);
    EXPECT_NO_THROW(RestrictedOp::hybrid(1, 1, Permutation({1, 2}), {scaled, scaled}, false));
    EXPECT_EQ(kind_of([&] { RestrictedOp::wang(Permutation({1, 2}), {1.0, 0.0}, false); }),
              ErrorKind::RankDeficientBlock);
    EXPECT_EQ(kind_of([&] { RestrictedOp::wang(Permutation({1, 2}), {1.0, 0.5}); }), ErrorKind::NonUnitary);
    EXPECT_EQ(kind_of([&] { RestrictedOp::hybrid(2, 1, Permutation({1, 2}), {scaled, scaled}, false); }),
              ErrorKind::DimensionMismatch);
}

TEST(Decompose, RoundTripRandomUnitaryBlocks) {
    random::Engine rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const RestrictedOp op = random::hybrid_op(2, 1, rng);
        const HybridOp h = op.as_hybrid();
        const Decomposition d = decompose(build(op), 2, 1);
        EXPECT_EQ(d.x, h.x);
        EXPECT_EQ(d.ebit_cost, 4u);
        for (std::size_t i = 0; i < d.blocks.size(); ++i) {
            EXPECT_LT(max_abs_diff(d.blocks[i], h.blocks[i]), 1e-15);
        }
    }
}

TEST(Decompose, IdentityAndPauliTensorIdentity) {
    const Decomposition id = decompose(CMatrix::Identity(8, 8), 2, 1);
    EXPECT_TRUE(id.x.is_identity());
    for (const CMatrix &g : id.blocks) {
        EXPECT_LT(max_abs_diff(g, CMatrix::Identity(2, 2)), 1e-15);
    }
    const Decomposition flip = decompose(kron(sigma(1), CMatrix::Identity(2, 2)), 1, 1);
    EXPECT_EQ(flip.x.values(), (std::vector<std::size_t>{2, 1}));
    EXPECT_LT(max_abs_diff(flip.blocks[0], CMatrix::Identity(2, 2)), 1e-15);
    EXPECT_LT(max_abs_diff(flip.blocks[1], CMatrix::Identity(2, 2)), 1e-15);
}

TEST(Decompose, ErrorPaths) {
    random::Engine rng(6);
    const CMatrix dense = random::unitary(4, rng);
    EXPECT_EQ(kind_of([&] { decompose(dense, 1, 1); }), ErrorKind::NotBlockPermutation);

    CMatrix near_zero = CMatrix::Identity(4, 4);
    near_zero(0, 3) = 5e-10;
    EXPECT_EQ(kind_of([&] { decompose(near_zero, 1, 1); }), ErrorKind::AmbiguousStructure);

    CMatrix tiny = CMatrix::Identity(4, 4);
    tiny(0, 3) = 5e-11; // below the band: treated as an exact zero
    EXPECT_NO_THROW(decompose(tiny, 1, 1));

    CMatrix singular = CMatrix::Identity(4, 4);
    singular(3, 3) = 0.0;
    singular(3, 2) = 1.0; // block 2 = [[1,0],[1,0]]
    EXPECT_EQ(kind_of([&] { decompose(singular, 1, 1); }), ErrorKind::RankDeficientBlock);

    CMatrix two_in_row = CMatrix::Zero(2, 2);
    two_in_row(0, 0) = 1.0;
    two_in_row(0, 1) = 1.0;
    two_in_row(1, 0) = 1.0; // row 1 and column 1 both doubled
    EXPECT_EQ(kind_of([&] { decompose(two_in_row, 1, 0); }), ErrorKind::NotBlockPermutation);
    EXPECT_EQ(kind_of([&] { decompose(CMatrix::Identity(4, 4), 1, 2); }), ErrorKind::DimensionMismatch);
}

TEST(Classify, DiagonalIsCheapest) {
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = std::polar(1.0, 0.4);
    d(1, 1) = std::polar(1.0, 2.1);
    const auto found = classify(d);
    ASSERT_FALSE(found.empty());
    EXPECT_EQ(found.front().n, 1u);
    EXPECT_EQ(found.front().m, 0u);
    EXPECT_EQ(found.front().ebit_cost, 1u);
}

TEST(Classify, DenseUnitaryFallsBackToBqst) {
    random::Engine rng(7);
    const auto found = classify(random::unitary(4, rng));
    ASSERT_EQ(found.size(), 1u);
    EXPECT_EQ(found[0].n, 0u);
    EXPECT_EQ(found[0].m, 2u);
    EXPECT_EQ(found[0].ebit_cost, 4u);
}

TEST(Classify, IdentityAndProductSets) {
    const auto id = classify(CMatrix::Identity(4, 4));
    EXPECT_EQ(id.front().n, 2u);
    EXPECT_EQ(id.front().ebit_cost, 2u);

    random::Engine rng(8);
    for (int rep = 0; rep < 10; ++rep) {
        const CMatrix t = build(random::wang_op(2, rng));
        const CMatrix v = random::unitary(2, rng);
        const auto found = classify(kron(t, v));
        bool has_split = false;
        for (const Decomposition &d : found) {
            if (d.n == 2 && d.m == 1) {
                has_split = true;
                EXPECT_EQ(d.ebit_cost, 4u);
                EXPECT_LT(max_abs_diff(build(to_restricted_op(d)), kron(t, v)), 1e-14);
            }
        }
        EXPECT_TRUE(has_split);
        EXPECT_LE(found.front().ebit_cost, 4u);
    }
}

TEST(Classify, CostsAscendAndIncludeBqst) {
    random::Engine rng(9);
    for (std::size_t n = 0; n <= 3; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
            const std::size_t m = 3 - n;
            const RestrictedOp op = random::hybrid_op(n, m, rng);
            const auto found = classify(build(op));
            ASSERT_FALSE(found.empty());
            EXPECT_EQ(found.front().n, n);
            EXPECT_EQ(found.front().ebit_cost, n + 2 * m);
            for (std::size_t k = 0; k + 1 < found.size(); ++k) {
                EXPECT_LT(found[k].ebit_cost, found[k + 1].ebit_cost);
            }
            EXPECT_EQ(found.back().n, 0u);
            EXPECT_EQ(found.back().ebit_cost, 6u);
        }
    }
}

TEST(Classify, BlockDiagonalAdmitsEveryCoarserSplit) {
    random::Engine rng(10);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<CMatrix> blocks;
        for (int i = 0; i < 4; ++i) {
            blocks.push_back(random::unitary(2, rng));
        }
        const RestrictedOp op = RestrictedOp::hybrid(2, 1, Permutation::identity(2), blocks);
        const auto found = classify(build(op));
        ASSERT_EQ(found.size(), 3u);
        for (std::size_t k = 0; k < found.size(); ++k) {
            EXPECT_EQ(found[k].n, 2 - k);
            EXPECT_EQ(found[k].ebit_cost, 4 + k);
        }
    }
    CMatrix scaled = 2.0 * CMatrix::Identity(2, 2);
    EXPECT_EQ(kind_of([&] { classify(scaled); }), ErrorKind::NonUnitary);
}

} // namespace
} // namespace remoteop
