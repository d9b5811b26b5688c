#include "rq/error.hpp"

namespace rq {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitianSpectrum: return "NonHermitianSpectrum";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::UnityViolation: return "UnityViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BankMismatch: return "BankMismatch";
    case ErrorCode::BadPatchSize: return "BadPatchSize";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BandCountMismatch: return "BandCountMismatch";
    case ErrorCode::ZeroMu: return "ZeroMu";
    case ErrorCode::BadThresholds: return "BadThresholds";
    case ErrorCode::BadLength: return "BadLength";
    case ErrorCode::BadShape: return "BadShape";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::DivergedLoss: return "DivergedLoss";
    case ErrorCode::InvalidMask: return "InvalidMask";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace rq
