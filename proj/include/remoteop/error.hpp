#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace remoteop {

enum class ErrorKind {
    DimensionMismatch,
    TargetOutOfRange,
    NonUnitaryGate,
    BadIndex,
    BadPermutation,
    RankDeficientBlock,
    NonUnitary,
    NotBlockPermutation,
    AmbiguousStructure,
    EntanglementAlreadyConsumed,
    QubitCollision,
    InsufficientEntanglement,
    StageViolation,
    LocalityViolation,
    NonUnitaryMode,
    NotProductState,
    ZeroProbabilityOutcome,
    ConfigError,
    ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and tests) can dispatch on it without parsing messages.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

} // namespace remoteop
