#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace garma {

/// Missing-value marker used inside numeric series (quiet NaN).
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

[[nodiscard]] inline bool is_missing(double v) noexcept { return std::isnan(v); }

enum class IndexRole { Free, Conditioned, Marginalised };

struct IndexState {
  IndexRole role = IndexRole::Free;
  double value = 0.0;  // meaningful only for Conditioned

  friend bool operator==(const IndexState&, const IndexState&) = default;
};

/// Per-index annotation describing how each time index of a series enters a
/// distributional query. Conditioned entries always carry a finite value.
class CondPattern {
 public:
  CondPattern() = default;
  explicit CondPattern(std::size_t length) : states_(length) {}

  [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
  [[nodiscard]] IndexRole role(std::size_t i) const { return states_.at(i).role; }
  [[nodiscard]] double value(std::size_t i) const { return states_.at(i).value; }
  [[nodiscard]] const std::vector<IndexState>& states() const noexcept { return states_; }

  void set_free(std::size_t i);
  /// Throws InvalidParam if `v` is not finite.
  void set_conditioned(std::size_t i, double v);
  void set_marginalised(std::size_t i);

  [[nodiscard]] std::vector<std::size_t> indices(IndexRole role) const;
  [[nodiscard]] std::vector<std::size_t> free_indices() const { return indices(IndexRole::Free); }
  [[nodiscard]] std::vector<std::size_t> conditioned_indices() const {
    return indices(IndexRole::Conditioned);
  }
  [[nodiscard]] std::size_t count(IndexRole role) const;

  /// Values of the conditioned indices, in index order.
  [[nodiscard]] std::vector<double> conditioned_values() const;

  /// True when both patterns assign the same role to every index
  /// (conditioning values are ignored).
  [[nodiscard]] bool same_roles(const CondPattern& other) const;

  friend bool operator==(const CondPattern&, const CondPattern&) = default;

 private:
  std::vector<IndexState> states_;
};

/// Density/CDF syntax: missing (NaN) entries of `row` become Marginalised,
/// flagged entries become Conditioned on the row's value, the rest Free.
/// An empty `cond` means no flags. Throws CondOnMissing when a flag lands on
/// a missing value, AllMarginalised when every value is missing.
[[nodiscard]] CondPattern build_pattern(std::span<const double> row, const std::vector<bool>& cond);

/// Generation syntax: numeric entries are conditioning values, NaN entries
/// are Free. Throws InvalidParam on infinite entries.
[[nodiscard]] CondPattern pattern_from_condvals(std::span<const double> condvals);

}  // namespace garma
