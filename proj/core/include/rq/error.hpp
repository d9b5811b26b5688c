#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rq {

enum class ErrorCode {
  NonHermitianSpectrum,
  DegenerateDenominator,
  UnityViolation,
  DimensionMismatch,
  BankMismatch,
  BadPatchSize,
  ShapeMismatch,
  BandCountMismatch,
  ZeroMu,
  BadThresholds,
  BadLength,
  BadShape,
  NonPositiveSigma,
  DivergedLoss,
  InvalidMask,
  InvalidArgument,
  NonFinite,
  Io,
  Config,
};

std::string_view error_name(ErrorCode code);

// All library failures are reported through this type; code() identifies the
// error class so callers (and the CLI) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace rq
