#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "garma/arma.hpp"
#include "garma/error.hpp"
#include "garma/mvn.hpp"
#include "garma/pattern.hpp"

namespace garma {

/// One or more equal-length series, one per row. Missing values are NaN.
using SeriesMatrix = Eigen::MatrixXd;

/// Per-series outputs of dgarma/pgarma.
struct DistributionValues {
  std::vector<double> values;
  Warnings warnings;
};

/// Density of each row of `x` under the GARMA law of `spec`.
///
/// Missing entries are marginalised out before conditioning; every row must
/// have the same missing positions (DimensionMismatch otherwise). `cond`, when
/// non-empty, has one flag per column and marks conditioning values; the
/// same flags apply to every row. The result is the conditional density of
/// the remaining free values (marginal density if nothing is flagged). A row
/// with no free values gets density 1 (log 0) and a NoFreeValues warning so
/// that products of densities are unaffected.
[[nodiscard]] DistributionValues dgarma(const SeriesMatrix& x, const ArmaSpec& spec,
                                        const std::vector<bool>& cond = {}, bool log = false);

/// Joint probability that every free value of a row is at most the supplied
/// coordinate, with marginalisation and conditioning exactly as in dgarma.
/// Rows with three or more free values use the QMC engine with `cdf`.
[[nodiscard]] DistributionValues pgarma(const SeriesMatrix& x, const ArmaSpec& spec,
                                        const std::vector<bool>& cond = {}, bool log = false,
                                        const mvn::CdfOptions& cdf = {});

/// Single-series conveniences.
[[nodiscard]] DistributionValues dgarma(std::span<const double> x, const ArmaSpec& spec,
                                        const std::vector<bool>& cond = {}, bool log = false);
[[nodiscard]] DistributionValues pgarma(std::span<const double> x, const ArmaSpec& spec,
                                        const std::vector<bool>& cond = {}, bool log = false,
                                        const mvn::CdfOptions& cdf = {});

struct GeneratedSeries {
  SeriesMatrix series;
  Warnings warnings;
};

/// `n` independent length-`m` series. Numeric entries of `condvals` are
/// copied into every row and the remaining entries are drawn from the
/// conditional law given them; NaN entries mark values to generate. An
/// empty `condvals` means no conditioning.
[[nodiscard]] GeneratedSeries rgarma(long n, long m, const ArmaSpec& spec,
                                     std::span<const double> condvals, std::uint64_t seed);

[[nodiscard]] inline GeneratedSeries rgarma(long n, long m, const ArmaSpec& spec, std::uint64_t seed) {
  return rgarma(n, m, spec, std::span<const double>{}, seed);
}

}  // namespace garma
