#include "garma/distribution.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <string>

namespace garma {

namespace {

using mvn::GaussianConditioner;
using Eigen::VectorXd;

const Warning kNoFreeValuesWarning{
    WarningKind::NoFreeValues,
    "no free values remain after conditioning/marginalisation; output set to 1"};

VectorXd gather(const std::vector<double>& row, const std::vector<std::size_t>& idx) {
  VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = row[idx[i]];
  return out;
}

// Shared driver for dgarma/pgarma. `evaluate` maps (free values, conditional
// mean, conditioner) to a natural-scale or log-scale value as requested.
template <class Evaluate>
DistributionValues evaluate_rows(const SeriesMatrix& x, const ArmaSpec& spec, const std::vector<bool>& cond,
                                 bool log, Evaluate&& evaluate) {
  if (x.rows() < 1 || x.cols() < 1) throw Error(ErrorCode::EmptyInput, "input has no series values");
  const auto m = static_cast<std::size_t>(x.cols());
  if (!cond.empty() && cond.size() != m) {
    throw Error(ErrorCode::DimensionMismatch, "cond has length " + std::to_string(cond.size()) +
                                                  " but each series has length " + std::to_string(m));
  }

  auto model = variance_matrix(static_cast<long>(m), spec);
  DistributionValues out;
  out.warnings = std::move(model.warnings);
  out.values.resize(static_cast<std::size_t>(x.rows()));

  // One pattern is shared by every row, so all rows must agree on which
  // positions are missing.
  for (Eigen::Index r = 1; r < x.rows(); ++r) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (is_missing(x(r, j)) != is_missing(x(0, j))) {
        throw Error(ErrorCode::DimensionMismatch, "rows 1 and " + std::to_string(r + 1) +
                                                      " differ in missing positions (column " +
                                                      std::to_string(j + 1) + "); use separate calls");
      }
    }
  }

  // Rows with the same missing mask still differ in conditioning values, so
  // the factorisation is cached by role pattern.
  std::map<std::vector<IndexRole>, std::unique_ptr<GaussianConditioner>> cache;
  std::vector<double> row(m);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (std::size_t j = 0; j < m; ++j) row[j] = x(r, static_cast<Eigen::Index>(j));
    auto& slot = out.values[static_cast<std::size_t>(r)];

    CondPattern pattern;
    try {
      pattern = build_pattern(row, cond);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AllMarginalised) throw;
      slot = log ? 0.0 : 1.0;
      add_warning(out.warnings, kNoFreeValuesWarning);
      continue;
    }
    auto free = pattern.free_indices();
    if (free.empty()) {
      slot = log ? 0.0 : 1.0;
      add_warning(out.warnings, kNoFreeValuesWarning);
      continue;
    }

    std::vector<IndexRole> key;
    key.reserve(m);
    for (const auto& s : pattern.states()) key.push_back(s.role);
    auto& conditioner = cache[key];
    if (!conditioner) {
      conditioner = std::make_unique<GaussianConditioner>(model.entries, free, pattern.conditioned_indices());
      merge_warnings(out.warnings, conditioner->warnings());
    }

    const auto& cidx = conditioner->conditioned_indices();
    const VectorXd free_mean = VectorXd::Constant(static_cast<Eigen::Index>(free.size()), spec.mean);
    const VectorXd cond_mean = VectorXd::Constant(static_cast<Eigen::Index>(cidx.size()), spec.mean);
    const VectorXd mean = conditioner->mean(free_mean, cond_mean, gather(row, cidx));
    slot = evaluate(gather(row, free), mean, *conditioner, out.warnings);
  }
  return out;
}

SeriesMatrix as_row(std::span<const double> x) {
  SeriesMatrix m(1, static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) m(0, static_cast<Eigen::Index>(j)) = x[j];
  return m;
}

}  // namespace

DistributionValues dgarma(const SeriesMatrix& x, const ArmaSpec& spec, const std::vector<bool>& cond, bool log) {
  return evaluate_rows(x, spec, cond, log,
                       [log](const VectorXd& y, const VectorXd& mean, const GaussianConditioner& c, Warnings&) {
                         const double lv = mvn::log_density(y, mean, c.cond_factor());
                         return log ? lv : std::exp(lv);
                       });
}

DistributionValues pgarma(const SeriesMatrix& x, const ArmaSpec& spec, const std::vector<bool>& cond, bool log,
                          const mvn::CdfOptions& cdf) {
  return evaluate_rows(
      x, spec, cond, log,
      [log, &cdf](const VectorXd& y, const VectorXd& mean, const GaussianConditioner& c, Warnings& warnings) {
        auto result = mvn::mvn_cdf(y, {mean, c.cond_cov()}, cdf);
        merge_warnings(warnings, result.warnings);
        return log ? std::log(result.value) : result.value;
      });
}

DistributionValues dgarma(std::span<const double> x, const ArmaSpec& spec, const std::vector<bool>& cond, bool log) {
  return dgarma(as_row(x), spec, cond, log);
}

DistributionValues pgarma(std::span<const double> x, const ArmaSpec& spec, const std::vector<bool>& cond, bool log,
                          const mvn::CdfOptions& cdf) {
  return pgarma(as_row(x), spec, cond, log, cdf);
}

GeneratedSeries rgarma(long n, long m, const ArmaSpec& spec, std::span<const double> condvals, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidParam, "n (number of series) must be at least 1");
  if (m < 1) throw Error(ErrorCode::InvalidParam, "m (series length) must be at least 1");
  if (!condvals.empty() && condvals.size() != static_cast<std::size_t>(m)) {
    throw Error(ErrorCode::DimensionMismatch, "condvals has length " + std::to_string(condvals.size()) +
                                                  ", expected " + std::to_string(m));
  }
  const CondPattern pattern =
      condvals.empty() ? CondPattern(static_cast<std::size_t>(m)) : pattern_from_condvals(condvals);
  auto model = variance_matrix(m, spec);

  GeneratedSeries out;
  out.warnings = std::move(model.warnings);
  out.series.resize(n, m);
  const auto free = pattern.free_indices();
  const auto cidx = pattern.conditioned_indices();
  for (std::size_t j : cidx) out.series.col(static_cast<Eigen::Index>(j)).setConstant(pattern.value(j));
  if (free.empty()) return out;

  GaussianConditioner conditioner(model.entries, free, cidx);
  merge_warnings(out.warnings, conditioner.warnings());
  const auto values = pattern.conditioned_values();
  const VectorXd mean =
      conditioner.mean(VectorXd::Constant(static_cast<Eigen::Index>(free.size()), spec.mean),
                       VectorXd::Constant(static_cast<Eigen::Index>(cidx.size()), spec.mean),
                       Eigen::Map<const VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
  const auto draws = mvn::sample(mean, conditioner.cond_factor(), static_cast<std::size_t>(n), seed);
  for (std::size_t k = 0; k < free.size(); ++k) {
    out.series.col(static_cast<Eigen::Index>(free[k])) = draws.col(static_cast<Eigen::Index>(k));
  }
  return out;
}

}  // namespace garma
