#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "garma/distribution.hpp"
#include "../support/oracles.hpp"

using namespace garma;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const ArmaSpec kWhite{};
const ArmaSpec kReference{{0.8, -0.2}, {0.6, 0.3}, 0.0, 1.0};
const double kNaN = kMissing;

double std_normal_log_pdf(double x) { return -0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * x * x; }

bool has_warning(const Warnings& w, WarningKind kind) {
  for (const auto& x : w) {
    if (x.kind == kind) return true;
  }
  return false;
}

std::vector<double> reference_condvals() {
  std::vector<double> c(30, kNaN);
  c[0] = -4.0;
  c[11] = 0.0;
  c[29] = 4.0;
  return c;
}

}  // namespace

TEST_CASE("build_pattern examples") {
  const std::vector<double> row{1.0, 2.0, 3.0};
  const auto all_free = build_pattern(row, {});
  CHECK(all_free.count(IndexRole::Free) == 3);

  const std::vector<double> cv{kNaN, 5.0, kNaN};
  const auto p = pattern_from_condvals(cv);
  CHECK(p.role(0) == IndexRole::Free);
  CHECK(p.role(1) == IndexRole::Conditioned);
  CHECK(p.value(1) == 5.0);
  CHECK(p.role(2) == IndexRole::Free);

  const std::vector<double> gap{1.0, kNaN, 3.0};
  try {
    (void)build_pattern(gap, {false, true, false});
    FAIL("expected CondOnMissing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CondOnMissing);
  }
  const auto mixed = build_pattern(gap, {true, false, false});
  CHECK(mixed.role(0) == IndexRole::Conditioned);
  CHECK(mixed.role(1) == IndexRole::Marginalised);
  CHECK(mixed.role(2) == IndexRole::Free);

  const std::vector<double> none{kNaN, kNaN};
  try {
    (void)build_pattern(none, {});
    FAIL("expected AllMarginalised");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AllMarginalised);
  }
  CHECK_THROWS_AS((void)build_pattern(row, {true, false}), Error);
  const std::vector<double> bad{1.0, INFINITY};
  CHECK_THROWS_AS((void)pattern_from_condvals(bad), Error);
}

TEST_CASE("dgarma examples") {
  const std::vector<double> zero{0.0};
  CHECK(dgarma(zero, kWhite).values[0] == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(dgarma(zero, kWhite, {}, true).values[0] == doctest::Approx(std_normal_log_pdf(0.0)).epsilon(1e-15));

  // All positions conditioned: density 1 with a warning.
  const std::vector<double> y{0.4, -0.3, 1.1};
  const auto all = dgarma(y, kReference, {true, true, true});
  CHECK(all.values[0] == 1.0);
  CHECK(has_warning(all.warnings, WarningKind::NoFreeValues));
  CHECK(dgarma(y, kReference, {true, true, true}, true).values[0] == 0.0);

  // Conditioned + missing leaves nothing free as well.
  const std::vector<double> partial{0.4, kNaN, 1.1};
  const auto cm = dgarma(partial, kReference, {true, false, true});
  CHECK(cm.values[0] == 1.0);
  CHECK(has_warning(cm.warnings, WarningKind::NoFreeValues));

  CHECK_THROWS_AS((void)dgarma(y, kReference, {true, false}), Error);
  CHECK_THROWS_AS((void)dgarma(partial, kReference, {false, true, false}), Error);
  CHECK_THROWS_AS((void)dgarma(y, {{1.0}, {}, 0.0, 1.0}), NonStationaryError);
}

TEST_CASE("dgarma matches the explicit Gaussian density with the model mean") {
  const ArmaSpec spec{{0.5}, {0.4}, 2.0, 1.7};
  const std::vector<double> y{2.3, 1.1, 2.9, 1.8};
  const MatrixXd lam = variance_matrix(4, spec).entries;
  const VectorXd yv = Eigen::Map<const VectorXd>(y.data(), 4);
  const double expected = testing::explicit_log_density(yv, VectorXd::Constant(4, 2.0), lam);
  CHECK(std::abs(dgarma(y, spec, {}, true).values[0] - expected) <= 1e-12);
}

TEST_CASE("chain rule for AR(1)") {
  const ArmaSpec ar1{{0.5}, {}, 0.0, 1.0};
  const std::vector<double> y{0.3, -1.2, 0.7};
  const double joint = dgarma(y, ar1).values[0];
  const double cond = dgarma(y, ar1, {true, true, false}).values[0];
  const std::vector<double> head{0.3, -1.2, kNaN};
  const double marg = dgarma(head, ar1).values[0];
  CHECK(joint == doctest::Approx(cond * marg).epsilon(1e-13));
}

TEST_CASE("chain rule over random specs and splits") {
  std::mt19937_64 gen(314);
  std::normal_distribution<double> z;
  std::uniform_int_distribution<int> len(2, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const ArmaSpec spec = testing::random_spec(gen);
    const auto m = static_cast<std::size_t>(len(gen));
    std::vector<double> y(m);
    for (auto& v : y) v = spec.mean + z(gen);
    std::vector<bool> flags(m, false);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < m; ++i) flags[i] = coin(gen);
    flags[0] = true;
    flags[m - 1] = false;

    std::vector<double> cond_only(y);
    for (std::size_t i = 0; i < m; ++i) {
      if (!flags[i]) cond_only[i] = kNaN;
    }
    const double full = dgarma(y, spec, {}, true).values[0];
    const double cond = dgarma(y, spec, flags, true).values[0];
    const double marg = dgarma(cond_only, spec, {}, true).values[0];
    CHECK(std::abs(full - cond - marg) <= 1e-8);
  }
}

TEST_CASE("white-noise marginalisation consistency") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> z;
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(trial % 8);
    std::vector<double> y(m);
    std::vector<bool> flags(m, false);
    double expected = 0.0;
    bool any_free = false;
    for (std::size_t i = 0; i < m; ++i) {
      y[i] = z(gen);
      const bool missing = coin(gen);
      if (missing) {
        y[i] = kNaN;
      } else if (coin(gen)) {
        flags[i] = true;
      } else {
        expected += std_normal_log_pdf(y[i]);
        any_free = true;
      }
    }
    bool all_missing = true;
    for (double v : y) all_missing = all_missing && is_missing(v);
    if (all_missing) continue;
    const double got = dgarma(y, kWhite, flags, true).values[0];
    if (!any_free) {
      CHECK(got == 0.0);
    } else {
      CHECK(std::abs(std::exp(got) - std::exp(expected)) <= 1e-12 * std::exp(expected));
    }
  }
}

TEST_CASE("vectorised calls equal row-by-row calls exactly") {
  const auto gen = rgarma(16, 30, kReference, 99);
  MatrixXd x = gen.series;
  x.col(4).setConstant(kNaN);
  std::vector<bool> flags(30, false);
  flags[0] = flags[11] = true;
  const auto d = dgarma(x, kReference, flags, true);
  const mvn::CdfOptions opts{1e-3, 17, 10'000'000};
  MatrixXd small = x.leftCols(4);
  const auto p = pgarma(small, kReference, {true, false, false, false}, false, opts);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const VectorXd row = x.row(r).transpose();
    const auto single = dgarma(std::span<const double>(row.data(), 30), kReference, flags, true);
    CHECK(d.values[static_cast<std::size_t>(r)] == single.values[0]);
    const VectorXd srow = small.row(r).transpose();
    const auto ps = pgarma(std::span<const double>(srow.data(), 4), kReference, {true, false, false, false}, false, opts);
    CHECK(p.values[static_cast<std::size_t>(r)] == ps.values[0]);
  }
}

TEST_CASE("rows must share their missing positions") {
  MatrixXd x(2, 3);
  x << 1, kNaN, 2, 1, 2, kNaN;
  CHECK_THROWS_AS((void)dgarma(x, kReference), Error);
  CHECK_THROWS_AS((void)pgarma(x, kReference), Error);
}

TEST_CASE("pgarma examples") {
  const std::vector<double> zero1{0.0};
  CHECK(pgarma(zero1, kWhite).values[0] == 0.5);
  const std::vector<double> zero2{0.0, 0.0};
  CHECK(std::abs(pgarma(zero2, kWhite).values[0] - 0.25) <= 1e-10);
  // AR(1) with phi = 0.5 has lag-one correlation 0.5.
  const ArmaSpec ar1{{0.5}, {}, 0.0, 1.0};
  CHECK(std::abs(pgarma(zero2, ar1).values[0] - 1.0 / 3.0) <= 1e-10);
  CHECK(std::abs(pgarma(zero2, ar1, {}, true).values[0] - std::log(1.0 / 3.0)) <= 1e-9);

  // Equicorrelated orthant through conditioning-free marginalisation: with
  // only lags 0 and 2 kept, correlation is 0.25.
  const std::vector<double> gap{0.0, kNaN, 0.0};
  const double expected = 0.25 + std::asin(0.25) / (2.0 * std::numbers::pi);
  CHECK(std::abs(pgarma(gap, ar1).values[0] - expected) <= 1e-10);

  const std::vector<double> y{0.4, -0.3, 1.1};
  const auto all = pgarma(y, kReference, {true, true, true});
  CHECK(all.values[0] == 1.0);
  CHECK(has_warning(all.warnings, WarningKind::NoFreeValues));
}

TEST_CASE("pgarma conditioning matches the conditional normal") {
  const ArmaSpec ar1{{0.5}, {}, 1.0, 1.0};
  const std::vector<double> y{3.0, 1.4};
  // y2 | y1 = 3 ~ N(1 + 0.5 * 2, 1).
  CHECK(pgarma(y, ar1, {true, false}).values[0] == doctest::Approx(mvn::normal_cdf(-0.6)).epsilon(1e-14));
}

TEST_CASE("pgarma far upper tail") {
  const auto lam = variance_matrix(6, kReference).entries;
  const double sd = std::sqrt(lam(0, 0));
  std::vector<double> up(6, 40.0 * sd);
  CHECK(pgarma(up, kReference).values[0] >= 1.0 - 1e-10);
  std::vector<double> up2(2, 40.0 * sd);
  CHECK(pgarma(up2, kReference).values[0] >= 1.0 - 1e-10);
}

TEST_CASE("rgarma reproduces conditioning values exactly") {
  const auto cv = reference_condvals();
  const auto out = rgarma(16, 30, kReference, cv, 2021);
  REQUIRE(out.series.rows() == 16);
  REQUIRE(out.series.cols() == 30);
  for (Eigen::Index r = 0; r < 16; ++r) {
    CHECK(out.series(r, 0) == -4.0);
    CHECK(out.series(r, 11) == 0.0);
    CHECK(out.series(r, 29) == 4.0);
    for (Eigen::Index c = 0; c < 30; ++c) CHECK(std::isfinite(out.series(r, c)));
  }
  CHECK(out.series.col(5).cwiseAbs().sum() > 0.0);

  const std::vector<double> fixed{1.5, -2.0, 0.25};
  const auto copies = rgarma(4, 3, kReference, fixed, 1);
  for (Eigen::Index r = 0; r < 4; ++r) {
    for (Eigen::Index c = 0; c < 3; ++c) CHECK(copies.series(r, c) == fixed[static_cast<std::size_t>(c)]);
  }

  CHECK(rgarma(3, 30, kReference, cv, 5).series == rgarma(3, 30, kReference, cv, 5).series);
  CHECK(rgarma(3, 30, kReference, cv, 5).series != rgarma(3, 30, kReference, cv, 6).series);
  CHECK_THROWS_AS((void)rgarma(0, 3, kReference, 1), Error);
  CHECK_THROWS_AS((void)rgarma(2, 0, kReference, 1), Error);
  CHECK_THROWS_AS((void)rgarma(2, 4, kReference, fixed, 1), Error);
  const std::vector<double> bad{1.0, INFINITY, kNaN};
  CHECK_THROWS_AS((void)rgarma(2, 3, kReference, bad, 1), Error);
}

TEST_CASE("rgarma white-noise covariance") {
  const std::size_t count = 100000;
  const auto out = rgarma(static_cast<long>(count), 4, kWhite, 77).series;
  const double n = static_cast<double>(count);
  const VectorXd mean = out.colwise().mean();
  const MatrixXd centred = out.rowwise() - mean.transpose();
  const MatrixXd cov = centred.transpose() * centred / (n - 1.0);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(mean(i)) <= 3.0 / std::sqrt(n));
    for (int j = 0; j < 4; ++j) {
      const double se = (i == j ? std::sqrt(2.0) : 1.0) / std::sqrt(n);
      CHECK(std::abs(cov(i, j) - (i == j ? 1.0 : 0.0)) <= 3.0 * se);
    }
  }
}

TEST_CASE("rgarma unconditional draws match the model covariance") {
  const ArmaSpec spec{{0.6}, {0.3}, 1.5, 0.8};
  const std::size_t count = 100000;
  const auto out = rgarma(static_cast<long>(count), 3, spec, 4242).series;
  const MatrixXd lam = variance_matrix(3, spec).entries;
  const double n = static_cast<double>(count);
  const VectorXd mean = out.colwise().mean();
  const MatrixXd centred = out.rowwise() - mean.transpose();
  const MatrixXd cov = centred.transpose() * centred / (n - 1.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(mean(i) - 1.5) <= 3.0 * std::sqrt(lam(i, i) / n));
    for (int j = 0; j < 3; ++j) {
      const double se = std::sqrt((lam(i, i) * lam(j, j) + lam(i, j) * lam(i, j)) / n);
      CHECK(std::abs(cov(i, j) - lam(i, j)) <= 3.0 * se);
    }
  }
}
