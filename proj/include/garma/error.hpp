#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace garma {

enum class ErrorCode {
  InvalidParam,
  NonStationary,
  DimensionMismatch,
  NotPositiveDefinite,
  AllConditioned,
  AllMarginalised,
  CondOnMissing,
  ToleranceNotReached,
  ZeroVariance,
  EmptyInput,
};

[[nodiscard]] const char* to_string(ErrorCode code) noexcept;

/// Exception thrown by every library operation. `code()` identifies the
/// failure class; the message is meant for end users.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when the AR polynomial has a root on or inside the unit circle.
class NonStationaryError : public Error {
 public:
  explicit NonStationaryError(double min_modulus);

  [[nodiscard]] double min_modulus() const noexcept { return min_modulus_; }

 private:
  double min_modulus_;
};

/// Raised when a Monte Carlo estimator exhausts its point budget. The best
/// available estimate is carried along so callers can still use it.
class ToleranceNotReachedError : public Error {
 public:
  ToleranceNotReachedError(double estimate, double error_estimate);

  [[nodiscard]] double estimate() const noexcept { return estimate_; }
  [[nodiscard]] double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

enum class WarningKind {
  NearUnitRoot,
  CommonRoots,
  NoFreeValues,
  CovarianceInflated,
};

[[nodiscard]] const char* to_string(WarningKind kind) noexcept;

/// Non-fatal condition attached to a result.
struct Warning {
  WarningKind kind;
  std::string message;

  friend bool operator==(const Warning&, const Warning&) = default;
};

using Warnings = std::vector<Warning>;

/// Appends `w` unless an identical warning is already present.
void add_warning(Warnings& list, Warning w);
void merge_warnings(Warnings& into, const Warnings& from);

}  // namespace garma
