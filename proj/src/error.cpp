#include "remoteop/error.hpp"

namespace remoteop {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorKind::NonUnitaryGate: return "NonUnitaryGate";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::BadPermutation: return "BadPermutation";
    case ErrorKind::RankDeficientBlock: return "RankDeficientBlock";
    case ErrorKind::NonUnitary: return "NonUnitary";
    case ErrorKind::NotBlockPermutation: return "NotBlockPermutation";
    case ErrorKind::AmbiguousStructure: return "AmbiguousStructure";
    case ErrorKind::EntanglementAlreadyConsumed: return "EntanglementAlreadyConsumed";
    case ErrorKind::QubitCollision: return "QubitCollision";
    case ErrorKind::InsufficientEntanglement: return "InsufficientEntanglement";
    case ErrorKind::StageViolation: return "StageViolation";
    case ErrorKind::LocalityViolation: return "LocalityViolation";
    case ErrorKind::NonUnitaryMode: return "NonUnitaryMode";
    case ErrorKind::NotProductState: return "NotProductState";
    case ErrorKind::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

} // namespace remoteop
