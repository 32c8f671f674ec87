#pragma once

#include <array>
#include <variant>
#include <vector>

#include "remoteop/gates.hpp"

namespace remoteop {

/// One-qubit diagonal (d = 0) or antidiagonal (d = 1) operation. `u` lists the
/// two nonzero entries in row order: (u00, u11) for d = 0, (u01, u10) for d = 1.
struct HpvOp {
    Bit d = 0;
    std::array<Complex, 2> u{};
};

/// sum_m t_m |p_m(x), D><m, D| on N qubits.
struct WangOp {
    Permutation x;
    std::vector<Complex> t;
};

/// sum_m |p_m(x), D><m, D| (x) G_m on N + M qubits.
struct HybridOp {
    std::size_t n = 0;
    std::size_t m = 0;
    Permutation x;
    std::vector<CMatrix> blocks;
};

/// An operation from one of the restricted families. The factories validate
/// the family invariants; unitary_mode additionally requires unitarity.
class RestrictedOp {
  public:
    using Variant = std::variant<HpvOp, WangOp, HybridOp>;

    static RestrictedOp hpv(Bit d, std::array<Complex, 2> u, bool unitary_mode = true);
    static RestrictedOp wang(Permutation x, std::vector<Complex> t, bool unitary_mode = true);
    static RestrictedOp hybrid(std::size_t n, std::size_t m, Permutation x, std::vector<CMatrix> blocks,
                               bool unitary_mode = true);

    [[nodiscard]] const Variant &variant() const noexcept { return op_; }
    [[nodiscard]] bool unitary_mode() const noexcept { return unitary_mode_; }
    [[nodiscard]] std::string_view name() const;

    /// Block-permutation split (N, M) of this operation.
    [[nodiscard]] std::size_t n() const;
    [[nodiscard]] std::size_t m() const;
    [[nodiscard]] std::size_t num_qubits() const { return n() + m(); }
    [[nodiscard]] Permutation permutation() const;
    /// The operation in the general form: HPV and Wang blocks are 1x1.
    [[nodiscard]] HybridOp as_hybrid() const;

  private:
    RestrictedOp(Variant op, bool unitary_mode) : op_(std::move(op)), unitary_mode_(unitary_mode) {}

    Variant op_;
    bool unitary_mode_ = true;
};

/// Dense matrix with block (p_m(x), m) equal to G_m and zeros elsewhere.
GateMatrix build(const RestrictedOp &op);

struct Decomposition {
    std::size_t n = 0;
    std::size_t m = 0;
    Permutation x = Permutation::identity(0);
    std::vector<CMatrix> blocks;
    std::size_t ebit_cost = 0; // n + 2m
};

/// Recovers the permutation and blocks of a 2^(n+m) block-permutation matrix.
/// Throws NotBlockPermutation, RankDeficientBlock or AmbiguousStructure.
Decomposition decompose(const GateMatrix &u, std::size_t n, std::size_t m);

/// Every valid split of a unitary, cheapest first. Never empty for a unitary:
/// the n = 0 split always succeeds.
std::vector<Decomposition> classify(const GateMatrix &u);

RestrictedOp to_restricted_op(const Decomposition &d, bool unitary_mode = true);

} // namespace remoteop
