#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "garma/error.hpp"
#include "garma/pattern.hpp"

namespace garma::mvn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct GaussianParams {
  VectorXd mean;
  MatrixXd cov;
};

/// Lower-triangular factor with L L^T = cov + inflation * I.
struct CholeskyFactor {
  MatrixXd lower;
  double inflation = 0.0;
  Warnings warnings;

  [[nodiscard]] Eigen::Index dim() const noexcept { return lower.rows(); }
  /// sum_i log L_ii
  [[nodiscard]] double half_log_det() const;
};

/// Cholesky factorization. When the plain factorization fails, eps * mean(diag)
/// is added to the diagonal with eps = 1e-14, 1e-13, ..., 1e-8; the amount
/// used is reported in `inflation` together with a CovarianceInflated warning.
/// Throws NotPositiveDefinite beyond that, InvalidParam when `cov` is not
/// square, finite and symmetric.
[[nodiscard]] CholeskyFactor cholesky(const MatrixXd& cov);

/// log N(x | mean, cov).
[[nodiscard]] double log_density(const VectorXd& x, const GaussianParams& params);

/// log N(x | mean, L L^T) for a precomputed factor.
[[nodiscard]] double log_density(const VectorXd& x, const VectorXd& mean, const CholeskyFactor& factor);

struct ConditionalMoments {
  VectorXd cond_mean;
  MatrixXd cond_cov;
  /// Indices (into the original vector) that cond_mean/cond_cov refer to.
  std::vector<std::size_t> free_indices;
  Warnings warnings;
};

/// Precomputed Schur-complement structure for one free/conditioned split.
/// Only the split matters; conditioning values enter through `mean()`.
class GaussianConditioner {
 public:
  /// `free` and `conditioned` index into `cov`; `free` must be non-empty.
  GaussianConditioner(const MatrixXd& cov, std::vector<std::size_t> free,
                      std::vector<std::size_t> conditioned);

  [[nodiscard]] const std::vector<std::size_t>& free_indices() const noexcept { return free_; }
  [[nodiscard]] const std::vector<std::size_t>& conditioned_indices() const noexcept { return cond_; }
  [[nodiscard]] const MatrixXd& cond_cov() const noexcept { return cond_cov_; }
  [[nodiscard]] const CholeskyFactor& cond_factor() const noexcept { return cond_factor_; }
  [[nodiscard]] const Warnings& warnings() const noexcept { return warnings_; }

  /// mu_free + Cov_fc Cov_cc^{-1} (values - mu_cond)
  [[nodiscard]] VectorXd mean(const VectorXd& free_mean, const VectorXd& cond_mean,
                              const VectorXd& cond_values) const;

 private:
  std::vector<std::size_t> free_;
  std::vector<std::size_t> cond_;
  MatrixXd regression_;  // |free| x |cond|
  MatrixXd cond_cov_;
  CholeskyFactor cond_factor_;
  Warnings warnings_;
};

/// Conditional mean and covariance of the Free indices given the Conditioned
/// ones. Marginalised indices are dropped first. Throws AllConditioned when
/// no index is Free and DimensionMismatch when the pattern length differs.
[[nodiscard]] ConditionalMoments conditional_moments(const GaussianParams& params,
                                                     const CondPattern& pattern);

[[nodiscard]] MatrixXd submatrix(const MatrixXd& m, const std::vector<std::size_t>& rows,
                                 const std::vector<std::size_t>& cols);
[[nodiscard]] VectorXd subvector(const VectorXd& v, const std::vector<std::size_t>& idx);

enum class CdfMethod { ClosedForm1d, Quadrature2d, Qmc };

[[nodiscard]] const char* to_string(CdfMethod method) noexcept;

struct CdfOptions {
  double tol = 1e-5;
  std::uint64_t seed = 20211014;
  std::size_t max_points = 10'000'000;
};

struct CdfResult {
  double value = 0.0;
  double error_estimate = 0.0;
  CdfMethod method = CdfMethod::ClosedForm1d;
  /// Integrand evaluations used by the QMC engine.
  std::size_t points = 0;
  Warnings warnings;
};

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double z);

/// Standard normal quantile.
[[nodiscard]] double normal_quantile(double p);

/// P(X <= h, Y <= k) for a standard bivariate normal with correlation rho.
[[nodiscard]] double bivariate_normal_cdf(double h, double k, double rho, double* error = nullptr);

/// P(X <= upper) componentwise. Coordinates at +inf are marginalised out,
/// any -inf coordinate gives 0. One remaining dimension uses erfc, two use
/// adaptive Gauss-Kronrod on the bivariate arcsine integral, three or more
/// use the separation-of-variables transform with variable reordering and
/// randomized lattice QMC until the standard error is at most `tol`.
/// Throws ToleranceNotReachedError when `max_points` is exhausted.
[[nodiscard]] CdfResult mvn_cdf(const VectorXd& upper, const GaussianParams& params,
                                const CdfOptions& options = {});

/// `count` draws mean + L z as rows of a count x m matrix.
[[nodiscard]] MatrixXd sample(const GaussianParams& params, std::size_t count, std::uint64_t seed);

/// Same as above with a precomputed factor.
[[nodiscard]] MatrixXd sample(const VectorXd& mean, const CholeskyFactor& factor, std::size_t count,
                              std::uint64_t seed);

}  // namespace garma::mvn
