#include "garma/mvn.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "garma/random.hpp"

namespace garma::mvn {

namespace {

constexpr double kSymmetryTol = 1e-8;

void check_square_symmetric(const MatrixXd& cov) {
  if (cov.rows() != cov.cols()) {
    throw Error(ErrorCode::InvalidParam, "covariance matrix must be square");
  }
  if (!cov.allFinite()) throw Error(ErrorCode::InvalidParam, "covariance matrix must be finite");
  const double scale = cov.rows() > 0 ? cov.diagonal().cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(cov(i, j) - cov(j, i)) > kSymmetryTol * scale) {
        throw Error(ErrorCode::InvalidParam, "covariance matrix must be symmetric");
      }
    }
  }
}

bool try_llt(const MatrixXd& a, MatrixXd& lower) {
  Eigen::LLT<MatrixXd, Eigen::Lower> llt(a);
  if (llt.info() != Eigen::Success) return false;
  lower = llt.matrixL();
  return (lower.diagonal().array() > 0.0).all() && lower.allFinite();
}

}  // namespace

double CholeskyFactor::half_log_det() const { return lower.diagonal().array().log().sum(); }

CholeskyFactor cholesky(const MatrixXd& cov) {
  check_square_symmetric(cov);
  CholeskyFactor out;
  if (cov.rows() == 0) return out;
  if (try_llt(cov, out.lower)) return out;

  const double mean_diag = cov.diagonal().mean();
  if (mean_diag > 0.0) {
    for (double eps = 1e-14; eps <= 1.0001e-8; eps *= 10.0) {
      MatrixXd inflated = cov;
      inflated.diagonal().array() += eps * mean_diag;
      if (try_llt(inflated, out.lower)) {
        out.inflation = eps * mean_diag;
        char buf[96];
        std::snprintf(buf, sizeof buf, "covariance diagonal inflated by %.1e x mean diagonal", eps);
        add_warning(out.warnings, {WarningKind::CovarianceInflated, buf});
        return out;
      }
    }
  }
  throw Error(ErrorCode::NotPositiveDefinite,
              "covariance matrix is not positive definite (diagonal inflation cap 1e-8 exceeded)");
}

double log_density(const VectorXd& x, const VectorXd& mean, const CholeskyFactor& factor) {
  if (x.size() != mean.size() || x.size() != factor.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "argument, mean and covariance dimensions differ");
  }
  const auto m = static_cast<double>(x.size());
  const VectorXd z = factor.lower.triangularView<Eigen::Lower>().solve(x - mean);
  return -0.5 * m * std::log(2.0 * std::numbers::pi) - factor.half_log_det() - 0.5 * z.squaredNorm();
}

double log_density(const VectorXd& x, const GaussianParams& params) {
  if (params.mean.size() != params.cov.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "mean and covariance dimensions differ");
  }
  return log_density(x, params.mean, cholesky(params.cov));
}

MatrixXd submatrix(const MatrixXd& m, const std::vector<std::size_t>& rows,
                   const std::vector<std::size_t>& cols) {
  MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
    }
  }
  return out;
}

VectorXd subvector(const VectorXd& v, const std::vector<std::size_t>& idx) {
  VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(idx[i]));
  }
  return out;
}

GaussianConditioner::GaussianConditioner(const MatrixXd& cov, std::vector<std::size_t> free,
                                         std::vector<std::size_t> conditioned)
    : free_(std::move(free)), cond_(std::move(conditioned)) {
  if (free_.empty()) throw Error(ErrorCode::AllConditioned, "no free index remains to condition");
  const MatrixXd ff = submatrix(cov, free_, free_);
  if (cond_.empty()) {
    regression_ = MatrixXd::Zero(ff.rows(), 0);
    cond_cov_ = ff;
  } else {
    const auto cc_factor = cholesky(submatrix(cov, cond_, cond_));
    merge_warnings(warnings_, cc_factor.warnings);
    const auto lower = cc_factor.lower.triangularView<Eigen::Lower>();
    // W = Lc^{-1} S_cf, so S_fc S_cc^{-1} S_cf = W^T W.
    const MatrixXd w = lower.solve(submatrix(cov, cond_, free_));
    regression_ = cc_factor.lower.transpose().triangularView<Eigen::Upper>().solve(w).transpose();
    cond_cov_ = ff - w.transpose() * w;
    cond_cov_ = 0.5 * (cond_cov_ + cond_cov_.transpose()).eval();
  }
  cond_factor_ = cholesky(cond_cov_);
  merge_warnings(warnings_, cond_factor_.warnings);
}

VectorXd GaussianConditioner::mean(const VectorXd& free_mean, const VectorXd& cond_mean,
                                   const VectorXd& cond_values) const {
  if (cond_.empty()) return free_mean;
  return free_mean + regression_ * (cond_values - cond_mean);
}

ConditionalMoments conditional_moments(const GaussianParams& params, const CondPattern& pattern) {
  const auto m = static_cast<std::size_t>(params.mean.size());
  if (params.cov.rows() != params.mean.size() || pattern.size() != m) {
    throw Error(ErrorCode::DimensionMismatch,
                "pattern, mean and covariance must all have length " + std::to_string(m));
  }
  auto free = pattern.free_indices();
  auto cond = pattern.conditioned_indices();
  ConditionalMoments out;
  if (cond.empty()) {
    if (free.empty()) throw Error(ErrorCode::AllConditioned, "no free index remains");
    out.cond_mean = subvector(params.mean, free);
    out.cond_cov = submatrix(params.cov, free, free);
    out.free_indices = std::move(free);
    return out;
  }
  GaussianConditioner conditioner(params.cov, free, cond);
  const auto values = pattern.conditioned_values();
  const VectorXd cond_values = Eigen::Map<const VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  out.cond_mean = conditioner.mean(subvector(params.mean, free), subvector(params.mean, cond), cond_values);
  out.cond_cov = conditioner.cond_cov();
  out.free_indices = std::move(free);
  out.warnings = conditioner.warnings();
  return out;
}

MatrixXd sample(const VectorXd& mean, const CholeskyFactor& factor, std::size_t count,
                std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::InvalidParam, "sample count must be at least 1");
  if (mean.size() != factor.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "mean and covariance dimensions differ");
  }
  const Eigen::Index m = mean.size();
  Rng rng(seed);
  MatrixXd out(static_cast<Eigen::Index>(count), m);
  VectorXd z(m);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index j = 0; j < m; ++j) z(j) = rng.normal();
    out.row(r) = (mean + factor.lower.triangularView<Eigen::Lower>() * z).transpose();
  }
  return out;
}

MatrixXd sample(const GaussianParams& params, std::size_t count, std::uint64_t seed) {
  return sample(params.mean, cholesky(params.cov), count, seed);
}

}  // namespace garma::mvn
