#pragma once

#include <stdexcept>
#include <string>

namespace qconc {

enum class errc {
  not_hermitian,
  not_positive,
  trace_mismatch,
  dimension_mismatch,
  rank_out_of_range,
  nonpositive_lambda,
  regime_violation,
  domain_error,
  unknown_oracle,
  svd_failure,
  parse_error,
};

inline const char* to_string(errc c) {
  switch (c) {
    case errc::not_hermitian: return "NotHermitian";
    case errc::not_positive: return "NotPositive";
    case errc::trace_mismatch: return "TraceMismatch";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::rank_out_of_range: return "RankOutOfRange";
    case errc::nonpositive_lambda: return "NonpositiveLambda";
    case errc::regime_violation: return "RegimeViolation";
    case errc::domain_error: return "DomainError";
    case errc::unknown_oracle: return "UnknownOracle";
    case errc::svd_failure: return "SvdFailure";
    case errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Library error. `value()` carries the offending number when there is one
/// (e.g. the most negative eigenvalue for not_positive).
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what, double value = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), value_(value) {}

  errc code() const noexcept { return code_; }
  double value() const noexcept { return value_; }

  /// Numerical failures, as opposed to bad input.
  bool is_numeric() const noexcept { return code_ == errc::svd_failure; }

 private:
  errc code_;
  double value_;
};

}  // namespace qconc
