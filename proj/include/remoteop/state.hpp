#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "remoteop/error.hpp"
#include "remoteop/types.hpp"

namespace remoteop {

/// Normalized pure state over an ordered qubit register. Amplitude index bits
/// are big-endian: qubit 0 is the most-significant bit.
class StateVector {
  public:
    /// Throws DimensionMismatch unless amps.size() == 2^num_qubits and the
    /// squared norm is 1 within tol::kState.
    StateVector(std::size_t num_qubits, std::vector<Complex> amps);

    /// Renormalizes arbitrary nonzero amplitudes.
    static StateVector normalized(std::size_t num_qubits, std::vector<Complex> amps);
    static StateVector basis(std::size_t num_qubits, std::size_t index);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] const Complex &operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] CVector to_eigen() const;

  private:
    struct Unchecked {};
    StateVector(Unchecked, std::size_t num_qubits, std::vector<Complex> amps)
        : num_qubits_(num_qubits), amps_(std::move(amps)) {}

    std::size_t num_qubits_;
    std::vector<Complex> amps_;

    friend class StateBuilder;
};

/// Mutable scratch space for kernels. Finishing it validates or renormalizes.
class StateBuilder {
  public:
    explicit StateBuilder(const StateVector &s) : num_qubits_(s.num_qubits()), amps_(s.amps_) {}
    StateBuilder(std::size_t num_qubits, std::vector<Complex> amps)
        : num_qubits_(num_qubits), amps_(std::move(amps)) {}

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    std::span<Complex> amplitudes() noexcept { return amps_; }

    StateVector finish() &&;
    StateVector finish_renormalized() &&;

  private:
    std::size_t num_qubits_;
    std::vector<Complex> amps_;
};

class DensityMatrix {
  public:
    /// Validates shape, Hermiticity, unit trace and positivity.
    DensityMatrix(std::size_t num_qubits, CMatrix entries);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] const CMatrix &entries() const noexcept { return entries_; }
    [[nodiscard]] bool is_pure(double tol = tol::kState) const;

  private:
    std::size_t num_qubits_;
    CMatrix entries_;
};

/// One outcome of a projective measurement.
struct Branch {
    Bits outcome_bits;
    double probability = 0.0;
    StateVector post_state;
};

enum class GateCheck { Unitary, None };

StateVector tensor(const StateVector &a, const StateVector &b);

/// Applies `gate` to `targets` (targets[0] is the gate's most-significant
/// slot). With GateCheck::None a non-unitary gate is accepted and the result
/// is renormalized.
StateVector apply_gate(const StateVector &state, const CMatrix &gate, std::span<const Qubit> targets,
                       GateCheck check = GateCheck::Unitary);
inline StateVector apply_gate(const StateVector &state, const CMatrix &gate, std::initializer_list<Qubit> targets,
                              GateCheck check = GateCheck::Unitary) {
    return apply_gate(state, gate, std::span<const Qubit>(targets.begin(), targets.size()), check);
}

/// Exhaustive computational-basis measurement: one branch per outcome with
/// nonzero probability, in increasing outcome order.
std::vector<Branch> measure(const StateVector &state, std::span<const Qubit> qubits);

/// The branch for a prescribed outcome. Throws ZeroProbabilityOutcome when the
/// outcome cannot occur.
Branch project_outcome(const StateVector &state, std::span<const Qubit> qubits, const Bits &outcome);

/// Draws a single branch with a seeded generator; equal seeds give equal draws.
Branch sample_measure(const StateVector &state, std::span<const Qubit> qubits, std::uint64_t seed);

/// |<a|b>|^2.
double fidelity(const StateVector &a, const StateVector &b);

/// max_i |a_i - e^{i phi} b_i| where phi aligns the phase of the largest
/// amplitude of `a` with the matching amplitude of `b`.
double phase_aligned_deviation(const StateVector &a, const StateVector &b);

/// Reduced pure state on `qubits` (in the listed order) of a state that is a
/// product across that cut. Throws NotProductState otherwise.
StateVector extract_subsystem(const StateVector &state, std::span<const Qubit> qubits);

DensityMatrix to_density(const StateVector &s);
DensityMatrix apply_channel(const DensityMatrix &rho, const CMatrix &gate, std::span<const Qubit> targets);
DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const Qubit> keep);
/// Uhlmann fidelity; reduces to tr(rho sigma) when either argument is pure.
double dm_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma);

bool is_unitary(const CMatrix &m, double tol = tol::kState);

std::size_t bits_to_index(const Bits &bits);
Bits index_to_bits(std::size_t index, std::size_t width);

} // namespace remoteop
