// Orthant probabilities for multivariate normal distributions.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "garma/mvn.hpp"
#include "garma/random.hpp"

namespace garma::mvn {

const char* to_string(CdfMethod method) noexcept {
  switch (method) {
    case CdfMethod::ClosedForm1d: return "closed_form_1d";
    case CdfMethod::Quadrature2d: return "quadrature_2d";
    case CdfMethod::Qmc: return "qmc";
  }
  return "unknown";
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double bivariate_normal_cdf(double h, double k, double rho, double* error) {
  if (error) *error = 0.0;
  if (std::isnan(h) || std::isnan(k) || std::isnan(rho)) {
    throw Error(ErrorCode::InvalidParam, "bivariate normal arguments must not be NaN");
  }
  if (h == -INFINITY || k == -INFINITY) return 0.0;
  if (h == INFINITY) return normal_cdf(k);
  if (k == INFINITY) return normal_cdf(h);
  if (rho >= 1.0) return normal_cdf(std::min(h, k));
  if (rho <= -1.0) return std::max(0.0, normal_cdf(h) + normal_cdf(k) - 1.0);

  // P = Phi(h) Phi(k) + 1/(2 pi) int_0^{asin rho} exp(-(h^2 + k^2 - 2hk sin t) / (2 cos^2 t)) dt
  // with the exponent rearranged so that it stays finite as |t| -> pi/2.
  const double hk = h * k;
  const double dpos = (h - k) * (h - k);
  const double dneg = (h + k) * (h + k);
  auto integrand = [=](double t) {
    const double s = std::sin(t);
    const double c2 = std::cos(t) * std::cos(t);
    const double expo = s >= 0.0 ? dpos / (2.0 * c2) + hk / (1.0 + s) : dneg / (2.0 * c2) - hk / (1.0 - s);
    return std::exp(-expo);
  };
  const double upper = std::asin(rho);
  double err = 0.0;
  double integral = 0.0;
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  if (upper >= 0.0) {
    integral = Quadrature::integrate(integrand, 0.0, upper, 20, 1e-14, &err);
  } else {
    integral = -Quadrature::integrate(integrand, upper, 0.0, 20, 1e-14, &err);
  }
  const double ph = normal_cdf(h);
  const double pk = normal_cdf(k);
  const double value = ph * pk + integral / (2.0 * std::numbers::pi);
  if (error) *error = err / (2.0 * std::numbers::pi);
  return std::clamp(value, std::max(0.0, ph + pk - 1.0), std::min(ph, pk));
}

namespace {

std::vector<double> first_primes(std::size_t count) {
  std::vector<double> primes;
  for (std::uint64_t c = 2; primes.size() < count; ++c) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= c; ++d) {
      if (c % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(static_cast<double>(c));
  }
  return primes;
}

// Cholesky factor of the covariance with variables reordered so that the most
// constrained remaining variable (smallest conditional probability) comes
// first; `y` tracks the conditional truncated means used for the ordering.
struct SeparatedProblem {
  MatrixXd lower;
  VectorXd upper;
};

SeparatedProblem reorder_and_factor(VectorXd b, MatrixXd c) {
  const Eigen::Index n = b.size();
  MatrixXd l = MatrixXd::Zero(n, n);
  VectorXd y = VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = i;
    double best_prob = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = i; j < n; ++j) {
      double var = c(j, j);
      double shift = 0.0;
      for (Eigen::Index k = 0; k < i; ++k) {
        var -= l(j, k) * l(j, k);
        shift += l(j, k) * y(k);
      }
      const double sd = std::sqrt(std::max(var, 1e-15 * c(j, j)));
      const double prob = normal_cdf((b(j) - shift) / sd);
      if (prob < best_prob) {
        best_prob = prob;
        best = j;
      }
    }
    if (best != i) {
      std::swap(b(i), b(best));
      c.row(i).swap(c.row(best));
      c.col(i).swap(c.col(best));
      l.row(i).swap(l.row(best));
    }
    double var = c(i, i);
    double shift = 0.0;
    for (Eigen::Index k = 0; k < i; ++k) {
      var -= l(i, k) * l(i, k);
      shift += l(i, k) * y(k);
    }
    l(i, i) = std::sqrt(std::max(var, 1e-15 * c(i, i)));
    for (Eigen::Index r = i + 1; r < n; ++r) {
      double v = c(r, i);
      for (Eigen::Index k = 0; k < i; ++k) v -= l(r, k) * l(i, k);
      l(r, i) = v / l(i, i);
    }
    const double bt = (b(i) - shift) / l(i, i);
    const double prob = normal_cdf(bt);
    const double density = std::exp(-0.5 * bt * bt) / std::sqrt(2.0 * std::numbers::pi);
    y(i) = prob > 1e-300 ? -density / prob : bt;
  }
  return {std::move(l), std::move(b)};
}

class SeparatedIntegrand {
 public:
  explicit SeparatedIntegrand(const SeparatedProblem& problem)
      : l_(problem.lower), b_(problem.upper), y_(problem.upper.size()) {
    first_ = normal_cdf(b_(0) / l_(0, 0));
  }

  double operator()(const std::vector<double>& w) {
    const Eigen::Index n = b_.size();
    double e = first_;
    double f = e;
    for (Eigen::Index i = 1; i < n && f > 0.0; ++i) {
      const double u = std::clamp(w[static_cast<std::size_t>(i - 1)] * e, 1e-300, 1.0 - 1e-16);
      y_(i - 1) = normal_quantile(u);
      double shift = 0.0;
      for (Eigen::Index k = 0; k < i; ++k) shift += l_(i, k) * y_(k);
      e = normal_cdf((b_(i) - shift) / l_(i, i));
      f *= e;
    }
    return f;
  }

 private:
  const MatrixXd& l_;
  const VectorXd& b_;
  VectorXd y_;
  double first_ = 0.0;
};

constexpr std::size_t kShifts = 12;
constexpr std::size_t kInitialLatticeSize = 512;

CdfResult separated_qmc(const VectorXd& b, const MatrixXd& c, const CdfOptions& options) {
  const auto problem = reorder_and_factor(b, c);
  SeparatedIntegrand integrand(problem);
  const std::size_t dims = static_cast<std::size_t>(b.size()) - 1;

  std::vector<double> alpha = first_primes(dims);
  for (auto& a : alpha) {
    a = std::sqrt(a);
    a -= std::floor(a);
  }

  Rng rng(options.seed);
  std::vector<double> shift(dims), w(dims), w_anti(dims);
  double estimate = 0.0;
  double variance = 0.0;
  bool have_estimate = false;
  std::size_t used = 0;
  std::size_t lattice = kInitialLatticeSize;

  for (;;) {
    const std::size_t budget = options.max_points - used;
    lattice = std::min(lattice, budget / (2 * kShifts));
    if (lattice == 0) throw ToleranceNotReachedError(estimate, std::sqrt(variance));

    std::array<double, kShifts> means{};
    for (auto& mean : means) {
      for (auto& s : shift) s = rng.uniform();
      double sum = 0.0;
      for (std::size_t i = 1; i <= lattice; ++i) {
        for (std::size_t j = 0; j < dims; ++j) {
          double x = static_cast<double>(i) * alpha[j] + shift[j];
          x -= std::floor(x);
          w[j] = std::abs(2.0 * x - 1.0);
          w_anti[j] = 1.0 - w[j];
        }
        sum += 0.5 * (integrand(w) + integrand(w_anti));
      }
      mean = sum / static_cast<double>(lattice);
    }
    used += 2 * kShifts * lattice;

    double batch_mean = 0.0;
    for (double m : means) batch_mean += m;
    batch_mean /= static_cast<double>(kShifts);
    double batch_var = 0.0;
    for (double m : means) batch_var += (m - batch_mean) * (m - batch_mean);
    batch_var /= static_cast<double>(kShifts * (kShifts - 1));

    if (!have_estimate || batch_var == 0.0) {
      estimate = batch_mean;
      variance = batch_var;
      have_estimate = true;
    } else if (variance > 0.0) {
      const double weight = variance / (variance + batch_var);
      estimate += weight * (batch_mean - estimate);
      variance = variance * batch_var / (variance + batch_var);
    }

    if (std::sqrt(variance) <= options.tol) {
      CdfResult out;
      out.value = std::clamp(estimate, 0.0, 1.0);
      out.error_estimate = std::sqrt(variance);
      out.method = CdfMethod::Qmc;
      out.points = used;
      return out;
    }
    if (used >= options.max_points) throw ToleranceNotReachedError(estimate, std::sqrt(variance));
    lattice *= 2;
  }
}

}  // namespace

CdfResult mvn_cdf(const VectorXd& upper, const GaussianParams& params, const CdfOptions& options) {
  if (params.mean.size() != params.cov.rows() || upper.size() != params.mean.size()) {
    throw Error(ErrorCode::DimensionMismatch, "upper bound, mean and covariance dimensions differ");
  }
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidParam, "CDF tolerance must be positive");
  if (upper.hasNaN()) throw Error(ErrorCode::InvalidParam, "upper bounds must not be NaN");

  const auto factor = cholesky(params.cov);
  MatrixXd cov = params.cov;
  cov.diagonal().array() += factor.inflation;

  CdfResult out;
  out.warnings = factor.warnings;
  std::vector<std::size_t> keep;
  for (Eigen::Index i = 0; i < upper.size(); ++i) {
    if (upper(i) == -INFINITY) {
      out.value = 0.0;
      return out;
    }
    if (upper(i) != INFINITY) keep.push_back(static_cast<std::size_t>(i));
  }
  if (keep.empty()) {
    out.value = 1.0;
    return out;
  }

  const VectorXd b = subvector(upper, keep) - subvector(params.mean, keep);
  const MatrixXd c = submatrix(cov, keep, keep);
  if (keep.size() == 1) {
    out.value = normal_cdf(b(0) / std::sqrt(c(0, 0)));
    out.method = CdfMethod::ClosedForm1d;
    return out;
  }
  if (keep.size() == 2) {
    const double s0 = std::sqrt(c(0, 0));
    const double s1 = std::sqrt(c(1, 1));
    out.value = bivariate_normal_cdf(b(0) / s0, b(1) / s1, c(0, 1) / (s0 * s1), &out.error_estimate);
    out.method = CdfMethod::Quadrature2d;
    return out;
  }
  auto result = separated_qmc(b, c, options);
  result.warnings = std::move(out.warnings);
  return result;
}

}  // namespace garma::mvn
