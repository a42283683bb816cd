#include "garma/pattern.hpp"

#include <algorithm>
#include <string>

#include "garma/error.hpp"

namespace garma {

void CondPattern::set_free(std::size_t i) { states_.at(i) = {IndexRole::Free, 0.0}; }

void CondPattern::set_conditioned(std::size_t i, double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::InvalidParam,
                "conditioning value at index " + std::to_string(i + 1) + " must be finite");
  }
  states_.at(i) = {IndexRole::Conditioned, v};
}

void CondPattern::set_marginalised(std::size_t i) { states_.at(i) = {IndexRole::Marginalised, 0.0}; }

std::vector<std::size_t> CondPattern::indices(IndexRole role) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].role == role) out.push_back(i);
  }
  return out;
}

std::size_t CondPattern::count(IndexRole role) const {
  return static_cast<std::size_t>(std::count_if(
      states_.begin(), states_.end(), [role](const IndexState& s) { return s.role == role; }));
}

std::vector<double> CondPattern::conditioned_values() const {
  std::vector<double> out;
  for (const auto& s : states_) {
    if (s.role == IndexRole::Conditioned) out.push_back(s.value);
  }
  return out;
}

bool CondPattern::same_roles(const CondPattern& other) const {
  return std::equal(states_.begin(), states_.end(), other.states_.begin(), other.states_.end(),
                    [](const IndexState& a, const IndexState& b) { return a.role == b.role; });
}

CondPattern build_pattern(std::span<const double> row, const std::vector<bool>& cond) {
  if (!cond.empty() && cond.size() != row.size()) {
    throw Error(ErrorCode::DimensionMismatch, "cond has length " + std::to_string(cond.size()) +
                                                  " but the series has length " +
                                                  std::to_string(row.size()));
  }
  CondPattern pattern(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    const bool flagged = !cond.empty() && cond[i];
    if (is_missing(row[i])) {
      if (flagged) {
        throw Error(ErrorCode::CondOnMissing,
                    "index " + std::to_string(i + 1) +
                        " is flagged as a conditioning value but is missing");
      }
      pattern.set_marginalised(i);
    } else if (flagged) {
      pattern.set_conditioned(i, row[i]);
    }
  }
  if (pattern.count(IndexRole::Marginalised) == pattern.size()) {
    throw Error(ErrorCode::AllMarginalised, "every value in the series is missing");
  }
  return pattern;
}

CondPattern pattern_from_condvals(std::span<const double> condvals) {
  CondPattern pattern(condvals.size());
  for (std::size_t i = 0; i < condvals.size(); ++i) {
    if (!is_missing(condvals[i])) pattern.set_conditioned(i, condvals[i]);
  }
  return pattern;
}

}  // namespace garma
