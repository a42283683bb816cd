#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "garma/error.hpp"
#include "garma/pattern.hpp"

namespace garma {

/// Parameters of a stationary ARMA(p, q) process
///
///   y_t = mu + sum_i ar_i (y_{t-i} - mu) + e_t + sum_j ma_j e_{t-j},
///   e_t ~ IID N(0, error_var).
///
/// Empty coefficient lists denote degree-zero polynomials.
struct ArmaSpec {
  std::vector<double> ar;
  std::vector<double> ma;
  double mean = 0.0;
  double error_var = 1.0;
};

/// Relative truncation tolerance used when summing psi-weight products.
inline constexpr double kDefaultTruncationTol = 1e-14;

/// Margin below which a root is reported as close to the unit circle.
inline constexpr double kNearUnitRootMargin = 1e-6;

/// Distance below which an AR root and an MA root are reported as common.
inline constexpr double kCommonRootTol = 1e-8;

struct StationarityReport {
  /// Moduli of the roots of phi(x) = 1 - ar_1 x - ... - ar_p x^p, ascending.
  std::vector<double> root_moduli;
  Warnings warnings;

  [[nodiscard]] double min_modulus() const;
};

/// Checks the AR polynomial for stationarity via companion-matrix
/// eigenvalues. Throws NonStationaryError when a root has modulus <= 1 and
/// InvalidParam when error_var <= 0 or a coefficient is not finite. The MA
/// polynomial is unconstrained.
[[nodiscard]] StationarityReport validate_stationary(const ArmaSpec& spec);

/// MA(infinity) coefficients psi_0 .. psi_K of theta(x) / phi(x).
struct PsiWeights {
  std::vector<double> weights;
  std::size_t truncation_index = 0;
  /// Certified upper bound on sum_{i > K} |psi_i|.
  double tail_bound = 0.0;
  Warnings warnings;
};

/// Computes psi-weights by the convolution recursion, extending K until the
/// tail bound is at most `tol`. The bound comes from powers of the AR
/// companion matrix A: once ||A^k|| = c < 1 the tail of the homogeneous
/// recursion is at most S ||state_K|| / (1 - c) with S >= sum_{j<=k} ||A^j||.
[[nodiscard]] PsiWeights psi_weights(const ArmaSpec& spec, double tol = kDefaultTruncationTol);

/// Autocovariance gamma(0..L) (or autocorrelation when is_correlation).
struct AcvSequence {
  std::vector<double> values;
  bool is_correlation = false;
  Warnings warnings;

  [[nodiscard]] std::size_t lag_count() const noexcept { return values.size(); }
};

/// error_var * sum_{i>=0} psi_i psi_{i+l} for l = 0..max_lag, accurate to
/// `tol` relative to gamma(0).
[[nodiscard]] AcvSequence autocovariance(const ArmaSpec& spec, long max_lag,
                                         double tol = kDefaultTruncationTol);

/// First `n` lags (0..n-1) of the autocovariance, or autocorrelation if `corr`.
[[nodiscard]] AcvSequence acf_vector(long n, const ArmaSpec& spec, bool corr = false);

struct VarianceMatrix {
  Eigen::MatrixXd entries;
  /// Zero-based time indices of the rows/columns of `entries`.
  std::vector<std::size_t> index_labels;
  Warnings warnings;
};

/// Symmetric Toeplitz matrix with (i, j) entry values[|i - j|].
[[nodiscard]] Eigen::MatrixXd toeplitz(const std::vector<double>& values, std::size_t n);

/// Unconditional n x n variance (or correlation) matrix of n consecutive values.
[[nodiscard]] VarianceMatrix variance_matrix(long n, const ArmaSpec& spec, bool corr = false);

/// Conditional variance of the Free indices given the Conditioned ones, after
/// dropping Marginalised indices. Conditioning values do not affect the
/// result. Throws AllConditioned when no index is Free.
[[nodiscard]] VarianceMatrix variance_matrix(long n, const ArmaSpec& spec, const CondPattern& cond,
                                             bool corr = false);

}  // namespace garma
