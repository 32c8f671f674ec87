#pragma once

#include <optional>
#include <vector>

#include "remoteop/locc.hpp"

namespace remoteop {

struct TeleportBranch {
    LoccState state;
    TeleportRecord record;
};

/// Moves the state of `source` onto `bell_b` through the shared pair
/// (bell_a, bell_b). The sender owns `source` and `bell_a`: it applies
/// CNOT(source -> bell_a), H(source) and measures both, sending the two bits
/// (source bit first). The receiver then applies sigma_1^{bit2} sigma_3^{bit1}
/// to `bell_b`. One branch per Bell outcome, in increasing outcome order.
std::vector<TeleportBranch> teleport(const LoccState &state, Qubit source, Qubit bell_a, Qubit bell_b);

/// The branch for a prescribed Bell outcome (two bits).
TeleportBranch teleport(const LoccState &state, Qubit source, Qubit bell_a, Qubit bell_b, const Bits &outcome);

/// Pauli index of sigma_1^{bit2} sigma_3^{bit1} up to global phase.
int teleport_correction_index(const Bits &bell_outcome);

struct BqstBranch {
    LoccState state;
    std::vector<TeleportRecord> teleports;
    QubitList output; // Bob's qubits holding op|xi>
};

/// Bidirectional state teleportation of Bob's qubits `targets` (M of them):
/// each is teleported to Alice, she applies `op`, and the results are
/// teleported back onto fresh B-qubits. Uses the first 2M unconsumed pairs;
/// throws InsufficientEntanglement when fewer remain.
std::vector<BqstBranch> bqst(const LoccState &state, const CMatrix &op, const QubitList &targets,
                             GateCheck check = GateCheck::Unitary);

/// Full BQST run on a fresh layout of 2M pairs and M target qubits, every
/// branch enumerated.
std::vector<RunResult> run_bqst(const CMatrix &op, const StateVector &xi, GateCheck check = GateCheck::Unitary);

} // namespace remoteop
