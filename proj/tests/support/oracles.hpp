// Independent reference computations used only by the test suites. Nothing
// here calls into the code paths it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "garma/arma.hpp"

namespace garma::testing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// O(n^2) DFT straight from the definition.
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> sum{};
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      sum += x[t] * std::polar(1.0, angle);
    }
    out[k] = sum;
  }
  return out;
}

/// Gauss-Jordan inverse with partial pivoting.
inline MatrixXd gauss_jordan_inverse(MatrixXd a) {
  const Eigen::Index n = a.rows();
  MatrixXd inv = MatrixXd::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = c;
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(pivot, c))) pivot = r;
    }
    a.row(c).swap(a.row(pivot));
    inv.row(c).swap(inv.row(pivot));
    const double d = a(c, c);
    a.row(c) /= d;
    inv.row(c) /= d;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c);
      a.row(r) -= f * a.row(c);
      inv.row(r) -= f * inv.row(c);
    }
  }
  return inv;
}

/// Determinant by Gaussian elimination with partial pivoting.
inline double elimination_det(MatrixXd a) {
  const Eigen::Index n = a.rows();
  double det = 1.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = c;
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(pivot, c))) pivot = r;
    }
    if (pivot != c) {
      a.row(c).swap(a.row(pivot));
      det = -det;
    }
    det *= a(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) a.row(r) -= (a(r, c) / a(c, c)) * a.row(c);
  }
  return det;
}

/// Gaussian log-density using an explicit inverse and determinant.
inline double explicit_log_density(const VectorXd& x, const VectorXd& mean, const MatrixXd& cov) {
  const VectorXd d = x - mean;
  const double quad = d.dot(gauss_jordan_inverse(cov) * d);
  const auto m = static_cast<double>(x.size());
  return -0.5 * m * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(elimination_det(cov)) - 0.5 * quad;
}

/// Autocovariance by trapezoidal quadrature of the spectral density
///   gamma(l) = sigma^2 / (2 pi) int |theta(e^{-iw})|^2 / |phi(e^{-iw})|^2 cos(w l) dw,
/// which converges geometrically for periodic analytic integrands.
inline std::vector<double> spectral_autocovariance(const ArmaSpec& spec, std::size_t max_lag,
                                                   std::size_t points = 1 << 14) {
  std::vector<double> density(points);
  for (std::size_t j = 0; j < points; ++j) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points);
    std::complex<double> phi = 1.0, theta = 1.0;
    for (std::size_t i = 0; i < spec.ar.size(); ++i) phi -= spec.ar[i] * std::polar(1.0, -w * double(i + 1));
    for (std::size_t i = 0; i < spec.ma.size(); ++i) theta += spec.ma[i] * std::polar(1.0, -w * double(i + 1));
    density[j] = std::norm(theta) / std::norm(phi);
  }
  std::vector<double> out(max_lag + 1);
  for (std::size_t l = 0; l <= max_lag; ++l) {
    double sum = 0.0;
    for (std::size_t j = 0; j < points; ++j) {
      const double w = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points);
      sum += density[j] * std::cos(w * static_cast<double>(l));
    }
    out[l] = spec.error_var * sum / static_cast<double>(points);
  }
  return out;
}

/// Runs the recursive model equation directly with Gaussian innovations.
inline std::vector<double> simulate_recursion(const ArmaSpec& spec, std::size_t steps, std::size_t burn_in,
                                              std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(spec.error_var));
  const std::size_t p = spec.ar.size(), q = spec.ma.size();
  std::vector<double> y(burn_in + steps, spec.mean), e(burn_in + steps, 0.0);
  for (std::size_t t = 0; t < y.size(); ++t) {
    e[t] = noise(gen);
    double v = spec.mean + e[t];
    for (std::size_t i = 1; i <= p && i <= t; ++i) v += spec.ar[i - 1] * (y[t - i] - spec.mean);
    for (std::size_t i = 1; i <= q && i <= t; ++i) v += spec.ma[i - 1] * e[t - i];
    y[t] = v;
  }
  return {y.begin() + static_cast<std::ptrdiff_t>(burn_in), y.end()};
}

/// Sample autocovariance (divisor N, sample mean removed).
inline std::vector<double> sample_autocovariance(const std::vector<double>& y, std::size_t max_lag) {
  const double n = static_cast<double>(y.size());
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  std::vector<double> out(max_lag + 1, 0.0);
  for (std::size_t l = 0; l <= max_lag; ++l) {
    double s = 0.0;
    for (std::size_t t = l; t < y.size(); ++t) s += (y[t] - mean) * (y[t - l] - mean);
    out[l] = s / n;
  }
  return out;
}

/// Random stationary spec with p, q <= 2 and AR roots of modulus >= min_root.
inline ArmaSpec random_spec(std::mt19937_64& gen, double min_root = 1.15) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> order(0, 2);
  ArmaSpec spec;
  const int p = order(gen), q = order(gen);
  // AR part built from roots: two real roots or a complex pair.
  std::uniform_real_distribution<double> modulus(min_root, 3.0);
  if (p == 1) {
    const double r = modulus(gen) * (unit(gen) < 0 ? -1.0 : 1.0);
    spec.ar = {1.0 / r};
  } else if (p == 2) {
    if (unit(gen) < 0) {
      const double r1 = modulus(gen) * (unit(gen) < 0 ? -1.0 : 1.0);
      const double r2 = modulus(gen) * (unit(gen) < 0 ? -1.0 : 1.0);
      spec.ar = {1.0 / r1 + 1.0 / r2, -1.0 / (r1 * r2)};
    } else {
      const double r = modulus(gen);
      const double angle = std::numbers::pi * (0.5 * unit(gen) + 0.5);
      spec.ar = {2.0 * std::cos(angle) / r, -1.0 / (r * r)};
    }
  }
  for (int i = 0; i < q; ++i) spec.ma.push_back(unit(gen));
  std::uniform_real_distribution<double> var(0.5, 2.0);
  spec.error_var = var(gen);
  spec.mean = 2.0 * unit(gen);
  return spec;
}

/// Kolmogorov limiting survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// One-sample KS p-value against Uniform(0, 1) (asymptotic with the
/// Stephens small-sample correction).
inline double ks_uniform_pvalue(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, static_cast<double>(i + 1) / n - u[i]);
    d = std::max(d, u[i] - static_cast<double>(i) / n);
  }
  const double sn = std::sqrt(n);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

/// Two-sample KS p-value (asymptotic).
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

}  // namespace garma::testing
