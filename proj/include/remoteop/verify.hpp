#pragma once

#include <string>
#include <vector>

#include "remoteop/protocol.hpp"

namespace remoteop {

/// build(op) |xi>, renormalized when the operation is not unitary.
StateVector direct_apply(const RestrictedOp &op, const StateVector &xi);

/// |xi> = sum_m y_m |m,D> (x) |eta_m> split after the first N qubits.
/// y_m is real and non-negative; eta_m is normalized (2^M amplitudes; a
/// single amplitude when M = 0). Terms with y_m = 0 carry eta_m = |0...0>.
struct XiTerm {
    Complex y;
    std::vector<Complex> eta;
};
std::vector<XiTerm> expand_xi(const StateVector &xi, std::size_t n, std::size_t m);

/// Bits l_m^1 ... l_m^N of |p_m(x), D>.
Bits permutation_bits(const Permutation &x, std::size_t m);

/// Fixed outcomes for one protocol path.
struct PathOutcomes {
    Bits b;
    std::vector<Bits> to_alice; // one Bell outcome per teleport, Bob -> Alice
    Bits a;
    std::vector<Bits> to_bob;   // Alice -> Bob
};

/// Every outcome tuple for an (N, M) run: 4^N * 16^M paths.
std::vector<PathOutcomes> all_outcomes(std::size_t n, std::size_t m);

struct Checkpoint {
    std::string label; // Psi1 ... Psi5, Final
    double deviation = 0.0;
    bool pass = false;
};

struct TraceCheckReport {
    PathOutcomes outcomes;
    std::vector<Checkpoint> checkpoints;
    [[nodiscard]] bool passed() const;
    [[nodiscard]] double max_deviation() const;
};

/// Runs the engine pinned to `outcomes` and compares the global state after
/// each step with the closed form built from expand_xi, the bits of p_m(x)
/// and the sign factors prod_k (-1)^{a_k l_m^k}. Teleport corrections are
/// applied before the comparison.
TraceCheckReport step_trace(const RestrictedOp &op, const StateVector &xi, const PathOutcomes &outcomes,
                                double tolerance = tol::kState);

/// Runs the protocol on each eigenvector of rho and returns the largest entry
/// of |sum_k lambda_k sum_branches p |psi><psi| - T rho T^dag|.
/// Throws NonUnitaryMode for non-unitary operations.
double mixed_state_check(const RestrictedOp &op, const DensityMatrix &rho);

/// Fidelity of each branch's output against direct_apply.
std::vector<double> branch_fidelities(const RestrictedOp &op, const StateVector &xi,
                                      const std::vector<RunResult> &results);

/// Branch-for-branch comparison of two runs of the same path structure:
/// the largest phase-aligned state deviation, or +inf if the paths, their
/// probabilities or the ledgers disagree.
double compare_runs(const std::vector<RunResult> &lhs, const std::vector<RunResult> &rhs);

} // namespace remoteop
