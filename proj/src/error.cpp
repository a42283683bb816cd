#include "garma/error.hpp"

#include <algorithm>
#include <cstdio>

namespace garma {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::NonStationary: return "NonStationary";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::AllConditioned: return "AllConditioned";
    case ErrorCode::AllMarginalised: return "AllMarginalised";
    case ErrorCode::CondOnMissing: return "CondOnMissing";
    case ErrorCode::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::EmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

const char* to_string(WarningKind kind) noexcept {
  switch (kind) {
    case WarningKind::NearUnitRoot: return "NearUnitRoot";
    case WarningKind::CommonRoots: return "CommonRoots";
    case WarningKind::NoFreeValues: return "NoFreeValues";
    case WarningKind::CovarianceInflated: return "CovarianceInflated";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

namespace {

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

NonStationaryError::NonStationaryError(double min_modulus)
    : Error(ErrorCode::NonStationary,
            "AR polynomial has a root with modulus " + format_double("%.10g", min_modulus) +
                " (all roots must lie strictly outside the unit circle)"),
      min_modulus_(min_modulus) {}

ToleranceNotReachedError::ToleranceNotReachedError(double estimate, double error_estimate)
    : Error(ErrorCode::ToleranceNotReached,
            "sample cap reached before tolerance; best estimate " + format_double("%.10g", estimate) +
                " with standard error " + format_double("%.3g", error_estimate)),
      estimate_(estimate),
      error_estimate_(error_estimate) {}

void add_warning(Warnings& list, Warning w) {
  if (std::find(list.begin(), list.end(), w) == list.end()) list.push_back(std::move(w));
}

void merge_warnings(Warnings& into, const Warnings& from) {
  for (const auto& w : from) add_warning(into, w);
}

}  // namespace garma
