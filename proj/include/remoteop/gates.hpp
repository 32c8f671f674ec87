#pragma once

#include <cstdint>
#include <vector>

#include "remoteop/types.hpp"

namespace remoteop {

using GateMatrix = CMatrix;

/// Bijection p on {1, ..., 2^N}, stored 1-indexed: p(m) is the row that the
/// decimal basis state |m,D> is sent to.
class Permutation {
  public:
    /// Throws BadPermutation unless `map` is a permutation of 1..2^N.
    explicit Permutation(std::vector<std::size_t> map);

    static Permutation identity(std::size_t num_qubits);

    /// Lexicographic rank decoding (factorial number system). `label` runs over
    /// 1..(2^N)!, label 1 being the identity. Supported for N <= 4.
    static Permutation from_label(std::size_t num_qubits, std::uint64_t label);
    [[nodiscard]] std::uint64_t label() const;

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return map_.size(); }
    [[nodiscard]] std::size_t operator()(std::size_t m) const { return map_.at(m - 1); }
    [[nodiscard]] const std::vector<std::size_t> &values() const noexcept { return map_; }
    [[nodiscard]] Permutation inverse() const;
    [[nodiscard]] bool is_identity() const;

    friend bool operator==(const Permutation &, const Permutation &) = default;

  private:
    std::size_t num_qubits_ = 0;
    std::vector<std::size_t> map_;
};

/// sigma_0 (identity) and the three Pauli matrices. Throws BadIndex for i > 3.
GateMatrix sigma(int i);
GateMatrix hadamard();
/// sigma_0 when a = 0, sigma_3 when a = 1.
GateMatrix r_gate(Bit a);
/// Control in the more-significant slot.
GateMatrix cnot();
/// Exchanges the states of its two qubits.
GateMatrix swap_e();
/// Permutation matrix sum_m |p_m, D><m, D|.
GateMatrix r_n(const Permutation &p);

} // namespace remoteop
