#pragma once

#include <stdexcept>
#include <string>

namespace soc {

enum class ErrorCode {
    FileNotFound,
    HeaderMissing,
    TargetColumnMissing,
    EmptyAfterCleaning,
    InvalidSize,
    NoFeaturesSelected,
    ZeroVarianceFeature,
    SchemaMismatch,
    InvalidFractions,
    LengthMismatch,
    ZeroTargetVariance,
    TooFewSamples,
    NotStandardized,
    DimensionMismatch,
    ShapeMismatch,
    HeadDivisibility,
    OddDModel,
    InvalidConfig,
    InvalidK,
    SubsetTooLarge,
    EmptyInput,
    NotFitted,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace soc
