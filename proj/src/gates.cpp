#include "remoteop/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "remoteop/error.hpp"

namespace remoteop {

namespace {

std::size_t log2_exact(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) {
        ++k;
    }
    return (std::size_t{1} << k) == n ? k : static_cast<std::size_t>(-1);
}

std::uint64_t factorial(std::size_t n) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

constexpr std::size_t kMaxLabelQubits = 4;

} // namespace

Permutation::Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
    const std::size_t n = log2_exact(map_.size());
    if (map_.empty() || n == static_cast<std::size_t>(-1)) {
        fail(ErrorKind::BadPermutation, "permutation length " + std::to_string(map_.size()) + " is not a power of two");
    }
    num_qubits_ = n;
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t v : map_) {
        if (v < 1 || v > map_.size() || seen[v - 1]) {
            fail(ErrorKind::BadPermutation, "not a bijection on 1.." + std::to_string(map_.size()));
        }
        seen[v - 1] = true;
    }
}

Permutation Permutation::identity(std::size_t num_qubits) {
    std::vector<std::size_t> map(std::size_t{1} << num_qubits);
    std::iota(map.begin(), map.end(), std::size_t{1});
    return Permutation(std::move(map));
}

Permutation Permutation::from_label(std::size_t num_qubits, std::uint64_t label) {
    if (num_qubits > kMaxLabelQubits) {
        fail(ErrorKind::BadIndex, "permutation labels are supported for at most 4 qubits");
    }
    const std::size_t levels = std::size_t{1} << num_qubits;
    if (label < 1 || label > factorial(levels)) {
        fail(ErrorKind::BadIndex, "permutation label " + std::to_string(label) + " out of range");
    }
    std::vector<std::size_t> pool(levels);
    std::iota(pool.begin(), pool.end(), std::size_t{1});
    std::uint64_t rank = label - 1;
    std::vector<std::size_t> map;
    map.reserve(levels);
    for (std::size_t i = levels; i > 0; --i) {
        const std::uint64_t block = factorial(i - 1);
        const auto digit = static_cast<std::size_t>(rank / block);
        rank %= block;
        map.push_back(pool[digit]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return Permutation(std::move(map));
}

std::uint64_t Permutation::label() const {
    if (num_qubits_ > kMaxLabelQubits) {
        fail(ErrorKind::BadIndex, "permutation labels are supported for at most 4 qubits");
    }
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < map_.size(); ++i) {
        std::size_t smaller = 0;
        for (std::size_t j = i + 1; j < map_.size(); ++j) {
            smaller += map_[j] < map_[i] ? 1 : 0;
        }
        rank += smaller * factorial(map_.size() - 1 - i);
    }
    return rank + 1;
}

Permutation Permutation::inverse() const {
    std::vector<std::size_t> inv(map_.size());
    for (std::size_t m = 0; m < map_.size(); ++m) {
        inv[map_[m] - 1] = m + 1;
    }
    return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
    for (std::size_t m = 0; m < map_.size(); ++m) {
        if (map_[m] != m + 1) {
            return false;
        }
    }
    return true;
}

GateMatrix sigma(int i) {
    GateMatrix m = GateMatrix::Zero(2, 2);
    switch (i) {
    case 0:
        m << 1, 0, 0, 1;
        break;
    case 1:
        m << 0, 1, 1, 0;
        break;
    case 2:
        m << 0, Complex(0, -1), Complex(0, 1), 0;
        break;
    case 3:
        m << 1, 0, 0, -1;
        break;
    default:
        fail(ErrorKind::BadIndex, "sigma index " + std::to_string(i) + " not in 0..3");
    }
    return m;
}

GateMatrix hadamard() {
    GateMatrix m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

GateMatrix r_gate(Bit a) { return a ? sigma(3) : sigma(0); }

GateMatrix cnot() {
    GateMatrix m = GateMatrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return m;
}

GateMatrix swap_e() {
    GateMatrix m = GateMatrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 2) = 1;
    m(2, 1) = 1;
    m(3, 3) = 1;
    return m;
}

GateMatrix r_n(const Permutation &p) {
    const auto dim = static_cast<Eigen::Index>(p.size());
    GateMatrix m = GateMatrix::Zero(dim, dim);
    for (std::size_t col = 1; col <= p.size(); ++col) {
        m(static_cast<Eigen::Index>(p(col) - 1), static_cast<Eigen::Index>(col - 1)) = 1;
    }
    return m;
}

} // namespace remoteop
