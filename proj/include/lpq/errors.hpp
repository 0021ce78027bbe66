#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lpq {

enum class ErrorCode {
    DegenerateInstance,
    OverflowsLabelSpace,
    PeriodTooLarge,
    MarkedSetTooLarge,
    LabelOutOfRange,
    CaseMismatch,
    ZeroDenominator,
    NotUnitary,
    InvalidProbability,
    NonTermination,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DegenerateInstance: return "DegenerateInstance";
        case ErrorCode::OverflowsLabelSpace: return "OverflowsLabelSpace";
        case ErrorCode::PeriodTooLarge: return "PeriodTooLarge";
        case ErrorCode::MarkedSetTooLarge: return "MarkedSetTooLarge";
        case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorCode::CaseMismatch: return "CaseMismatch";
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::NotUnitary: return "NotUnitary";
        case ErrorCode::InvalidProbability: return "InvalidProbability";
        case ErrorCode::NonTermination: return "NonTermination";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message names the violated constraint.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace lpq
