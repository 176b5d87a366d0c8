#include "gwleaf/error.hpp"

namespace gwleaf {

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::NotNormalized: return "NotNormalized";
        case Errc::NotCritical: return "NotCritical";
        case Errc::Periodic: return "Periodic";
        case Errc::DegenerateMu1: return "DegenerateMu1";
        case Errc::ZeroLeafMass: return "ZeroLeafMass";
        case Errc::ThetaOutOfRange: return "ThetaOutOfRange";
        case Errc::EmptyComplement: return "EmptyComplement";
        case Errc::BadLawSpec: return "BadLawSpec";
        case Errc::NotAnExcursion: return "NotAnExcursion";
        case Errc::NotSummingToMinusOne: return "NotSummingToMinusOne";
        case Errc::SupportOverflow: return "SupportOverflow";
        case Errc::ArgumentOrder: return "ArgumentOrder";
        case Errc::InvalidCount: return "InvalidCount";
        case Errc::TooLarge: return "TooLarge";
        case Errc::StepBudgetExceeded: return "StepBudgetExceeded";
        case Errc::AttemptBudgetExceeded: return "AttemptBudgetExceeded";
        case Errc::ImpossibleCount: return "ImpossibleCount";
        case Errc::QuadratureNonConvergence: return "QuadratureNonConvergence";
        case Errc::DomainError: return "DomainError";
        case Errc::LatticeViolation: return "LatticeViolation";
        case Errc::InsufficientSupport: return "InsufficientSupport";
        case Errc::EmptySample: return "EmptySample";
        case Errc::CellTooSmall: return "CellTooSmall";
        case Errc::EnumerationCoverageTooLow: return "EnumerationCoverageTooLow";
    }
    return "Unknown";
}

}  // namespace gwleaf
