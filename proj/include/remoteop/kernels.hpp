#pragma once

#include <span>
#include <vector>

#include "remoteop/types.hpp"

// Dense amplitude kernels. The functions in `remoteop::kernels` are the
// OpenMP-parallel versions used by the simulator; `remoteop::kernels::reference`
// holds straightforward serial versions kept for cross-checking and benchmarks.
//
// Targets are given in gate order: targets[0] selects the most-significant bit
// of the gate's row/column index.

namespace remoteop::kernels {

/// Register size above which the kernels fork an OpenMP team.
inline constexpr std::size_t kParallelMinAmplitudes = std::size_t{1} << 12;

void apply_matrix(std::span<Complex> amps, std::size_t num_qubits, const CMatrix &gate,
                  std::span<const Qubit> targets);

/// Probability mass of each of the 2^k outcomes on `targets` (outcome index
/// uses the same bit order as apply_matrix).
std::vector<double> outcome_weights(std::span<const Complex> amps, std::size_t num_qubits,
                                    std::span<const Qubit> targets);

/// Zeroes every amplitude whose target bits differ from `outcome`. Returns the
/// squared norm that survives.
double project(std::span<Complex> amps, std::size_t num_qubits, std::span<const Qubit> targets,
               std::size_t outcome);

Complex inner_product(std::span<const Complex> bra, std::span<const Complex> ket);

double norm_squared(std::span<const Complex> amps);

void scale(std::span<Complex> amps, double factor);

namespace reference {

void apply_matrix(std::span<Complex> amps, std::size_t num_qubits, const CMatrix &gate,
                  std::span<const Qubit> targets);

std::vector<double> outcome_weights(std::span<const Complex> amps, std::size_t num_qubits,
                                    std::span<const Qubit> targets);

Complex inner_product(std::span<const Complex> bra, std::span<const Complex> ket);

} // namespace reference

} // namespace remoteop::kernels
