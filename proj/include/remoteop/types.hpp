#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace remoteop {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

using Bit = std::uint8_t;
using Bits = std::vector<Bit>;

/// Zero-based register position; qubit 0 is the most-significant bit of the
/// amplitude index.
using Qubit = std::size_t;
using QubitList = std::vector<Qubit>;

namespace tol {
inline constexpr double kState = 1e-10;    // equality of states and operators
inline constexpr double kPsdFloor = 1e-9;  // smallest eigenvalue accepted as PSD
inline constexpr double kNorm = 1e-12;     // norm preservation under unitaries
inline constexpr double kFidelity = 1e-9;  // default acceptance tolerance for fidelities
inline constexpr double kZeroBlock = 1e-9; // block treated as zero below this
inline constexpr double kAmbiguous = 1e-10;
inline constexpr double kRank = 1e-8;      // minimum singular value of a block
} // namespace tol

} // namespace remoteop
