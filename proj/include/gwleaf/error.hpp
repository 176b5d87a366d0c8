#pragma once

#include <stdexcept>
#include <string>

namespace gwleaf {

enum class Errc {
    NotNormalized,
    NotCritical,
    Periodic,
    DegenerateMu1,
    ZeroLeafMass,
    ThetaOutOfRange,
    EmptyComplement,
    BadLawSpec,
    NotAnExcursion,
    NotSummingToMinusOne,
    SupportOverflow,
    ArgumentOrder,
    InvalidCount,
    TooLarge,
    StepBudgetExceeded,
    AttemptBudgetExceeded,
    ImpossibleCount,
    QuadratureNonConvergence,
    DomainError,
    LatticeViolation,
    InsufficientSupport,
    EmptySample,
    CellTooSmall,
    EnumerationCoverageTooLow,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace gwleaf
