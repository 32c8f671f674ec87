#include <gtest/gtest.h>

#include "remoteop/error.hpp"
#include "remoteop/gates.hpp"
#include "remoteop/random.hpp"
#include "remoteop/teleport.hpp"
#include "test_support.hpp"

namespace remoteop {
namespace {

using testing::embedded_matrix;
using testing::max_abs_diff;

// One pair (A1, B1) and one target Y1; Bob teleports Y1 to Alice's A1.
LoccState single_pair(const StateVector &psi) { return LoccState::with_bell_pairs(Registers(1, 1), psi); }

TEST(Teleport, ZeroInEveryBranch) {
    const LoccState s = single_pair(StateVector::basis(1, 0));
    const Registers &r = s.registers();
    const auto branches = teleport(s, r.y(1), r.b(1), r.a(1));
    ASSERT_EQ(branches.size(), 4u);
    for (const TeleportBranch &br : branches) {
        const QubitList recv{r.a(1)};
        EXPECT_NEAR(fidelity(extract_subsystem(br.state.state(), recv), StateVector::basis(1, 0)), 1.0, 1e-14);
        EXPECT_NEAR(br.state.probability(), 0.25, 1e-10);
        EXPECT_EQ(br.record.ebits_used, 1u);
        EXPECT_EQ(br.record.cbits_used, 2u);
        EXPECT_EQ(br.state.ledger().ebits_consumed, 1u);
        EXPECT_EQ(br.state.ledger().cbits_bob_to_alice, 2u);
        EXPECT_TRUE(br.state.pair_consumed(1));
    }
}

// Independent oracle: the same circuit from embedded global matrices and a
// projector, then the receiver correction.
CVector oracle_branch(const StateVector &start, Bit m1, Bit m2) {
    // Layout A1=0, B1=1, Y1=2; source Y1, sender half B1, receiver A1.
    CVector v = start.to_eigen();
    v = embedded_matrix(cnot(), {2, 1}, 3) * v;
    v = embedded_matrix(hadamard(), {2}, 3) * v;
    for (std::size_t i = 0; i < 8; ++i) {
        const Bit y = i & 1U;
        const Bit b = (i >> 1) & 1U;
        if (y != m1 || b != m2) {
            v(static_cast<Eigen::Index>(i)) = 0.0;
        }
    }
    const CMatrix correction = sigma(m2 ? 1 : 0) * sigma(m1 ? 3 : 0);
    v = embedded_matrix(correction, {0}, 3) * v;
    return v.normalized();
}

TEST(Teleport, RandomQubitMatchesCircuitOracle) {
    random::Engine rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector psi = random::state(1, rng);
        const LoccState s = single_pair(psi);
        const Registers &r = s.registers();
        const auto branches = teleport(s, r.y(1), r.b(1), r.a(1));
        ASSERT_EQ(branches.size(), 4u);
        for (const TeleportBranch &br : branches) {
            const Bit m1 = br.record.bell_outcome[0];
            const Bit m2 = br.record.bell_outcome[1];
            const StateVector expected = testing::from_eigen(oracle_branch(s.state(), m1, m2));
            EXPECT_LT(phase_aligned_deviation(expected, br.state.state()), 1e-12);
            const QubitList recv{r.a(1)};
            EXPECT_NEAR(fidelity(extract_subsystem(br.state.state(), recv), psi), 1.0, 1e-12);
            EXPECT_NEAR(br.state.probability(), 0.25, 1e-10);
        }
    }
}

TEST(Teleport, TransfersEntanglement) {
    random::Engine rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const StateVector pair = random::state(2, rng); // on Y1 Y2
        const LoccState s = LoccState::with_bell_pairs(Registers(1, 2), pair);
        const Registers &r = s.registers();
        for (const TeleportBranch &br : teleport(s, r.y(1), r.b(1), r.a(1))) {
            const QubitList keep{r.a(1), r.y(2)};
            const DensityMatrix reduced = partial_trace(to_density(br.state.state()), keep);
            EXPECT_LT(max_abs_diff(reduced.entries(), to_density(pair).entries()), 1e-12);
        }
    }
}

TEST(Teleport, CommutesWithSpectatorGate) {
    random::Engine rng(44);
    const StateVector pair = random::state(2, rng);
    const CMatrix v = random::unitary(2, rng);
    const LoccState s = LoccState::with_bell_pairs(Registers(1, 2), pair);
    const Registers &r = s.registers();
    const Bits outcome{1, 0};
    TeleportBranch first = teleport(s, r.y(1), r.b(1), r.a(1), outcome);
    first.state.apply(Party::Bob, v, {r.y(2)}, "spectator");
    LoccState gate_first = s;
    gate_first.apply(Party::Bob, v, {r.y(2)}, "spectator");
    const TeleportBranch second = teleport(gate_first, r.y(1), r.b(1), r.a(1), outcome);
    EXPECT_LT(phase_aligned_deviation(first.state.state(), second.state.state()), 1e-13);
}

TEST(Teleport, ErrorPaths) {
    const LoccState s = LoccState::with_bell_pairs(Registers(2, 1), StateVector::basis(1, 0));
    const Registers &r = s.registers();
    auto kind = [](auto &&f) {
        try {
            f();
        } catch (const Error &e) {
            return e.kind();
        }
        return ErrorKind::ConfigError;
    };
    const TeleportBranch once = teleport(s, r.y(1), r.b(1), r.a(1), Bits{0, 0});
    EXPECT_EQ(kind([&] { teleport(once.state, r.a(1), r.a(2), r.b(2), Bits{0, 0}); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind([&] { teleport(once.state, r.b(2), r.b(1), r.a(1)); }), ErrorKind::EntanglementAlreadyConsumed);
    EXPECT_EQ(kind([&] { teleport(s, r.b(1), r.b(1), r.a(1)); }), ErrorKind::QubitCollision);
    EXPECT_EQ(kind([&] { teleport(s, r.y(1), r.b(1), r.a(2)); }), ErrorKind::InsufficientEntanglement);
    // Alice cannot teleport Bob's Y1.
    EXPECT_EQ(kind([&] { teleport(s, r.y(1), r.a(1), r.b(1)); }), ErrorKind::LocalityViolation);
}

TEST(Teleport, CorrectionIndexConvention) {
    EXPECT_EQ(teleport_correction_index({0, 0}), 0);
    EXPECT_EQ(teleport_correction_index({0, 1}), 1);
    EXPECT_EQ(teleport_correction_index({1, 1}), 2);
    EXPECT_EQ(teleport_correction_index({1, 0}), 3);
}

TEST(Bqst, IdentityReturnsInput) {
    random::Engine rng(50);
    const StateVector xi = random::state(1, rng);
    const auto runs = run_bqst(CMatrix::Identity(2, 2), xi);
    ASSERT_EQ(runs.size(), 16u);
    double total = 0.0;
    for (const RunResult &r : runs) {
        EXPECT_NEAR(fidelity(r.final_y_state, xi), 1.0, 1e-12);
        EXPECT_EQ(r.ledger.ebits_consumed, 2u);
        EXPECT_EQ(r.ledger.cbits(), 4u);
        EXPECT_EQ(r.locality_violations, 0u);
        total += r.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Bqst, RandomUnitaryAllBranches) {
    random::Engine rng(51);
    for (int trial = 0; trial < 5; ++trial) {
        const StateVector xi = random::state(1, rng);
        const CMatrix u = random::unitary(2, rng);
        const StateVector target = testing::from_eigen(u * xi.to_eigen());
        for (const RunResult &r : run_bqst(u, xi)) {
            EXPECT_NEAR(fidelity(r.final_y_state, target), 1.0, 1e-12);
            EXPECT_NEAR(r.probability, 1.0 / 16.0, 1e-10);
        }
    }
}

TEST(Bqst, TwoQubitLedger) {
    random::Engine rng(52);
    const StateVector xi = random::state(2, rng);
    const CMatrix v = random::unitary(4, rng);
    const auto runs = run_bqst(v, xi);
    EXPECT_EQ(runs.size(), 256u);
    const StateVector target = testing::from_eigen(v * xi.to_eigen());
    for (const RunResult &r : runs) {
        EXPECT_EQ(r.ledger.ebits_consumed, 4u);
        EXPECT_EQ(r.ledger.cbits(), 8u);
        EXPECT_NEAR(fidelity(r.final_y_state, target), 1.0, 1e-12);
    }
}

TEST(Bqst, NeedsTwoPairsPerQubit) {
    const LoccState s = LoccState::with_bell_pairs(Registers(3, 2), StateVector::basis(2, 0));
    try {
        bqst(s, CMatrix::Identity(4, 4), s.registers().y_range(1, 2));
        ADD_FAILURE();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientEntanglement);
    }
}

} // namespace
} // namespace remoteop
