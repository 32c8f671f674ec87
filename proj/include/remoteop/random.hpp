#pragma once

#include <cstdint>
#include <random>

#include "remoteop/restricted.hpp"
#include "remoteop/state.hpp"

// Seeded generators for test instances. All draws come from the caller's
// engine so equal seeds reproduce equal instances.

namespace remoteop::random {

using Engine = std::mt19937_64;

StateVector state(std::size_t num_qubits, Engine &rng);
/// Haar-distributed unitary (QR of a complex Ginibre matrix with phases fixed).
CMatrix unitary(std::size_t dim, Engine &rng);
/// Full-rank but generally non-unitary matrix.
CMatrix full_rank(std::size_t dim, Engine &rng);
Complex phase(Engine &rng);
Permutation permutation(std::size_t num_qubits, Engine &rng);
/// Random density matrix of the given rank (1 <= rank <= 2^n).
DensityMatrix density(std::size_t num_qubits, std::size_t rank, Engine &rng);

RestrictedOp hpv_op(Bit d, Engine &rng);
RestrictedOp wang_op(std::size_t n, Engine &rng);
RestrictedOp wang_op(const Permutation &x, Engine &rng);
RestrictedOp hybrid_op(std::size_t n, std::size_t m, Engine &rng, bool unitary_mode = true);

} // namespace remoteop::random
