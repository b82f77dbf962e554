#include "qrq/errors.hpp"

namespace qrq {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonUnitaryInput: return "NonUnitaryInput";
    case ErrorCode::NegativeConstant: return "NegativeConstant";
    case ErrorCode::PreconditionReFIBroken: return "PreconditionReFIBroken";
    case ErrorCode::CosDeltaZero: return "CosDeltaZero";
    case ErrorCode::NuNonPositive: return "NuNonPositive";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace qrq
