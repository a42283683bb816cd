#include "garma/arma.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "garma/mvn.hpp"

namespace garma {

namespace {

// Psi-weight vectors never grow past this many terms.
constexpr std::size_t kMaxPsiTerms = std::size_t{1} << 24;

std::vector<double> trim_trailing_zeros(std::vector<double> coefs) {
  while (!coefs.empty() && coefs.back() == 0.0) coefs.pop_back();
  return coefs;
}

void check_params(const ArmaSpec& spec) {
  if (!(spec.error_var > 0.0) || !std::isfinite(spec.error_var)) {
    throw Error(ErrorCode::InvalidParam, "error variance must be positive and finite");
  }
  if (!std::isfinite(spec.mean)) throw Error(ErrorCode::InvalidParam, "mean must be finite");
  for (double c : spec.ar) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidParam, "AR coefficients must be finite");
  }
  for (double c : spec.ma) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidParam, "MA coefficients must be finite");
  }
}

Eigen::MatrixXd companion(const std::vector<double>& first_row) {
  const auto p = static_cast<Eigen::Index>(first_row.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) a(0, j) = first_row[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < p; ++i) a(i, i - 1) = 1.0;
  return a;
}

// Roots of 1 + c_1 x + ... + c_d x^d (c_d != 0). They are the reciprocals of
// the eigenvalues of the companion matrix with first row (-c_1, ..., -c_d).
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coefs) {
  std::vector<std::complex<double>> roots;
  if (coefs.empty()) return roots;
  std::vector<double> row(coefs.size());
  std::transform(coefs.begin(), coefs.end(), row.begin(), [](double c) { return -c; });
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion(row), false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidParam, "eigenvalue iteration failed for the companion matrix");
  }
  for (const auto& lambda : solver.eigenvalues()) roots.push_back(1.0 / lambda);
  return roots;
}

double inf_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

double StationarityReport::min_modulus() const {
  if (root_moduli.empty()) return std::numeric_limits<double>::infinity();
  return root_moduli.front();
}

StationarityReport validate_stationary(const ArmaSpec& spec) {
  check_params(spec);
  StationarityReport report;
  const auto ar = trim_trailing_zeros(spec.ar);
  if (ar.empty()) return report;

  std::vector<double> neg(ar.size());
  std::transform(ar.begin(), ar.end(), neg.begin(), [](double c) { return -c; });
  const auto ar_roots = polynomial_roots(neg);
  for (const auto& r : ar_roots) report.root_moduli.push_back(std::abs(r));
  std::sort(report.root_moduli.begin(), report.root_moduli.end());

  // A stationary phi is positive at x = +1 and x = -1. Checking the signs
  // directly catches unit roots that the eigenvalues place at 1 +- eps.
  double at_plus = 1.0, at_minus = 1.0, sign = 1.0;
  for (double c : ar) {
    sign = -sign;
    at_plus -= c;
    at_minus -= c * sign;
  }
  if (!(at_plus > 0.0) || !(at_minus > 0.0)) {
    throw NonStationaryError(std::min(report.min_modulus(), 1.0));
  }

  const double min_mod = report.min_modulus();
  if (!(min_mod > 1.0)) throw NonStationaryError(min_mod);
  if (min_mod < 1.0 + kNearUnitRootMargin) {
    add_warning(report.warnings,
                {WarningKind::NearUnitRoot,
                 "AR root modulus " + std::to_string(min_mod) +
                     " is close to the unit circle; truncation will be expensive"});
  }

  const auto ma = trim_trailing_zeros(spec.ma);
  for (const auto& s : polynomial_roots(ma)) {
    for (const auto& r : ar_roots) {
      if (std::abs(r - s) <= kCommonRootTol * std::max(1.0, std::abs(r))) {
        add_warning(report.warnings,
                    {WarningKind::CommonRoots,
                     "AR and MA polynomials share a root; the model is not reduced"});
      }
    }
  }
  return report;
}

PsiWeights psi_weights(const ArmaSpec& spec, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParam, "truncation tolerance must be positive");
  auto report = validate_stationary(spec);

  PsiWeights out;
  out.warnings = std::move(report.warnings);
  const auto ar = trim_trailing_zeros(spec.ar);
  const auto ma = trim_trailing_zeros(spec.ma);
  const std::size_t p = ar.size();
  const std::size_t q = ma.size();

  auto& psi = out.weights;
  psi.push_back(1.0);
  if (p == 0) {
    psi.insert(psi.end(), ma.begin(), ma.end());
    out.truncation_index = q;
    out.tail_bound = 0.0;
    return out;
  }

  // Find a power k of the companion matrix with ||A^k|| < 1/2 by repeated
  // squaring, bounding sum_{j=1..k} ||A^j|| along the way.
  Eigen::MatrixXd power = companion(ar);
  double power_norm = inf_norm(power);
  double partial_sum = power_norm;
  while (power_norm >= 0.5) {
    partial_sum *= 1.0 + power_norm;
    power = power * power;
    power_norm = inf_norm(power);
    if (!std::isfinite(partial_sum)) {
      throw Error(ErrorCode::InvalidParam, "AR polynomial too close to the unit circle to truncate");
    }
  }
  const double tail_factor = partial_sum / (1.0 - power_norm);

  auto next = [&](std::size_t k) {
    double v = k <= q ? ma[k - 1] : 0.0;
    for (std::size_t i = 1; i <= std::min(k, p); ++i) v += ar[i - 1] * psi[k - i];
    return v;
  };
  auto state_norm = [&](std::size_t k) {
    double m = 0.0;
    for (std::size_t i = 0; i < p && i <= k; ++i) m = std::max(m, std::abs(psi[k - i]));
    return m;
  };

  std::size_t k = 0;
  for (;;) {
    if (k >= q) {
      const double bound = tail_factor * state_norm(k);
      if (bound <= tol) {
        out.truncation_index = k;
        out.tail_bound = bound;
        return out;
      }
    }
    if (psi.size() >= kMaxPsiTerms) {
      throw Error(ErrorCode::InvalidParam, "psi-weights did not converge within the term limit");
    }
    ++k;
    psi.push_back(next(k));
  }
}

AcvSequence autocovariance(const ArmaSpec& spec, long max_lag, double tol) {
  if (max_lag < 0) throw Error(ErrorCode::InvalidParam, "max_lag must be non-negative");

  // Truncation error on every lag is at most max|psi| * tail_bound, and
  // gamma(0) / error_var >= psi_0^2 = 1.
  auto psi = psi_weights(spec, tol);
  const double peak = std::ranges::max(psi.weights, {}, [](double v) { return std::abs(v); });
  if (std::abs(peak) > 1.0) psi = psi_weights(spec, tol / std::abs(peak));

  const auto& w = psi.weights;
  const std::size_t count = static_cast<std::size_t>(max_lag) + 1;
  AcvSequence acv;
  acv.warnings = std::move(psi.warnings);
  acv.values.assign(count, 0.0);
  for (std::size_t lag = 0; lag < count && lag < w.size(); ++lag) {
    double sum = 0.0;
    for (std::size_t i = 0; i + lag < w.size(); ++i) sum += w[i] * w[i + lag];
    acv.values[lag] = spec.error_var * sum;
  }
  return acv;
}

AcvSequence acf_vector(long n, const ArmaSpec& spec, bool corr) {
  if (n < 1) throw Error(ErrorCode::InvalidParam, "n must be at least 1");
  auto acv = autocovariance(spec, n - 1);
  if (corr) {
    const double g0 = acv.values[0];
    for (auto& v : acv.values) v /= g0;
    acv.values[0] = 1.0;
    acv.is_correlation = true;
  }
  return acv;
}

Eigen::MatrixXd toeplitz(const std::vector<double>& values, std::size_t n) {
  if (values.size() < n) {
    throw Error(ErrorCode::DimensionMismatch, "not enough lags for the requested Toeplitz size");
  }
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = values[static_cast<std::size_t>(std::abs(i - j))];
  }
  return m;
}

namespace {

void to_correlation(Eigen::MatrixXd& m) {
  const Eigen::VectorXd inv_sd = m.diagonal().cwiseSqrt().cwiseInverse();
  m = inv_sd.asDiagonal() * m * inv_sd.asDiagonal();
  m.diagonal().setOnes();
}

}  // namespace

VarianceMatrix variance_matrix(long n, const ArmaSpec& spec, bool corr) {
  auto acv = acf_vector(n, spec, corr);
  VarianceMatrix out;
  out.entries = toeplitz(acv.values, static_cast<std::size_t>(n));
  out.index_labels.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < out.index_labels.size(); ++i) out.index_labels[i] = i;
  out.warnings = std::move(acv.warnings);
  return out;
}

VarianceMatrix variance_matrix(long n, const ArmaSpec& spec, const CondPattern& cond, bool corr) {
  if (n < 1) throw Error(ErrorCode::InvalidParam, "n must be at least 1");
  if (cond.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::DimensionMismatch,
                "conditioning pattern has length " + std::to_string(cond.size()) + ", expected " +
                    std::to_string(n));
  }
  auto full = variance_matrix(n, spec, false);

  mvn::GaussianParams params{Eigen::VectorXd::Zero(n), full.entries};
  auto moments = mvn::conditional_moments(params, cond);

  VarianceMatrix out;
  out.entries = std::move(moments.cond_cov);
  out.index_labels = std::move(moments.free_indices);
  out.warnings = std::move(full.warnings);
  merge_warnings(out.warnings, moments.warnings);
  if (corr) to_correlation(out.entries);
  return out;
}

}  // namespace garma
