#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "randboot/estimators.hpp"
#include "randboot/gaussian.hpp"
#include "randboot/rng.hpp"
#include "randboot/statistics.hpp"

namespace est = randboot::est;
namespace stats = randboot::stats;
namespace rng = randboot::rng;
namespace gauss = randboot::gauss;

TEST_CASE("slope statistic centers and scales the fitted coefficient") {
  Eigen::MatrixXd x(4, 1);
  x << 1, 2, 3, 4;
  Eigen::VectorXd y = 2.0 * x.col(0);
  const auto fit = est::ols(y, x);

  CHECK(stats::slope_stat(fit, 2.0, 2.0, 4).value ==
        doctest::Approx(0.0).epsilon(1e-12));
  // n^{alpha/2} (beta_hat - beta0) with alpha = 2 is n * (2 - 1.5).
  CHECK(stats::slope_stat(fit, 1.5, 2.0, 4).value ==
        doctest::Approx(4.0 * 0.5).epsilon(1e-10));
  // alpha = 1 gives the sqrt(n) rate.
  CHECK(stats::slope_stat(fit, 1.5, 1.0, 4).value ==
        doctest::Approx(2.0 * 0.5).epsilon(1e-10));

  Eigen::MatrixXd x2(4, 2);
  x2 << x, Eigen::VectorXd::Ones(4);
  const auto fit2 = est::ols(y, x2);
  CHECK_THROWS_AS(stats::slope_stat(fit2, 0.0, 2.0, 4),
                  std::invalid_argument);
}

TEST_CASE("cusum statistic on a two-point example") {
  Eigen::Vector2d e(1.0, -1.0);
  // Demeaned partial sums are 1, 0: the peak is 1.
  CHECK(stats::cusum_stat(e, stats::NuChoice::One).value ==
        doctest::Approx(1.0));
  CHECK(stats::cusum_stat(e, stats::NuChoice::MaxAbs).value ==
        doctest::Approx(1.0));
  CHECK(stats::cusum_stat(e, stats::NuChoice::SqrtSumSquares).value ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("cusum statistic is shift invariant and scale invariant") {
  auto s = rng::StreamFactory(41).child_stream(0);
  const Eigen::VectorXd e = rng::sample_std_normal(s, 30);
  const double base =
      stats::cusum_stat(e, stats::NuChoice::SqrtSumSquares).value;
  CHECK(stats::cusum_stat((e.array() + 7.0).matrix(),
                          stats::NuChoice::SqrtSumSquares)
            .value == doctest::Approx(base).epsilon(1e-9));
  CHECK(stats::cusum_stat((-2.5 * e).eval(), stats::NuChoice::SqrtSumSquares)
            .value == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("cusum statistic rejects degenerate normalizations") {
  CHECK_THROWS_AS(stats::cusum_stat(Eigen::VectorXd::Constant(5, 3.0),
                                    stats::NuChoice::SqrtSumSquares),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      stats::cusum_stat(Eigen::VectorXd::Zero(5), stats::NuChoice::MaxAbs),
      std::invalid_argument);
  CHECK_THROWS_AS(
      stats::cusum_stat(Eigen::VectorXd::Zero(1), stats::NuChoice::One),
      std::invalid_argument);
}

TEST_CASE("ks statistic: single observation at the null median") {
  Eigen::VectorXd r(1);
  r << 0.0;
  const auto v = stats::ks_stat(r, [](double x) { return gauss::cdf(x); });
  CHECK(v.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v.aux == 0.0);
}

TEST_CASE("ks statistic: nine observations at decile quantiles") {
  Eigen::VectorXd r(9);
  for (int i = 1; i <= 9; ++i) r[i - 1] = gauss::quantile(i / 10.0);
  const auto v = stats::ks_stat(r, [](double x) { return gauss::cdf(x); });
  // Every gap between the empirical steps and the deciles is 1/10, so the
  // supremum is 0.1 and the statistic is sqrt(9) * 0.1. The 0.1 gap is
  // attained at both the lowest and highest order statistic; rounding picks
  // one of them.
  CHECK(v.value == doctest::Approx(0.3).epsilon(1e-10));
  REQUIRE(v.aux.has_value());
  const double f_at = gauss::cdf(*v.aux);
  CHECK((std::abs(f_at - 0.1) < 1e-9 || std::abs(f_at - 0.9) < 1e-9));
}

TEST_CASE("ks statistic is invariant under the probability transform") {
  auto s = rng::StreamFactory(42).child_stream(0);
  const Eigen::VectorXd r = rng::sample_std_normal(s, 25);
  const double direct =
      stats::ks_stat(r, [](double x) { return gauss::cdf(x); }).value;
  Eigen::VectorXd u = r.unaryExpr([](double x) { return gauss::cdf(x); });
  const double transformed =
      stats::ks_stat(u, [](double x) { return std::clamp(x, 0.0, 1.0); })
          .value;
  CHECK(direct == doctest::Approx(transformed).epsilon(1e-12));
  CHECK(direct > 0.0);
  CHECK(direct <= std::sqrt(25.0));
}

TEST_CASE("boundary statistic is sqrt(n) times the constraint value") {
  est::AffineConstraint con;
  con.a = Eigen::Vector3d(0.0, 1.0, 0.0);
  con.b = 0.25;
  Eigen::Vector3d theta(5.0, -0.1, 2.0);
  CHECK(stats::boundary_stat(theta, con, 100).value ==
        doctest::Approx(10.0 * 0.15).epsilon(1e-12));
  est::AffineConstraint wrong;
  wrong.a = Eigen::Vector2d(1.0, 0.0);
  CHECK_THROWS_AS(stats::boundary_stat(theta, wrong, 100),
                  std::invalid_argument);
}

TEST_CASE("sup-F scan equals the brute-force two-regression maximum") {
  const int n = 50;
  auto s = rng::StreamFactory(43).child_stream(0);
  Eigen::MatrixXd x(n, 1);
  Eigen::VectorXd y(n);
  for (int t = 0; t < n; ++t) {
    x(t, 0) = s.normal();
    y[t] = 1.0 * x(t, 0) + s.normal();
  }

  const stats::SupFScan scan(x, 0.15, 0.85);
  int t_star = 0;
  const auto fast = scan.eval(y, &t_star);

  double best = -1.0;
  int best_t = 0;
  const auto restricted = est::ols(y, x);
  for (int t = scan.grid_begin(); t <= scan.grid_end(); ++t) {
    const auto unrestricted = est::ols(y, est::break_design(x, t));
    const double f = (restricted.ssr - unrestricted.ssr) /
                     (unrestricted.ssr / (n - 2.0));
    if (f > best) {
      best = f;
      best_t = t;
    }
  }
  CHECK(fast.value == doctest::Approx(best).epsilon(1e-9));
  CHECK(t_star == best_t);
  REQUIRE(fast.aux.has_value());
  CHECK(*fast.aux == doctest::Approx(best_t / 50.0).epsilon(1e-12));

  // Free-function form evaluates the same scan.
  CHECK(stats::sup_f(y, x, 0.15, 0.85).value ==
        doctest::Approx(fast.value).epsilon(1e-12));
}

TEST_CASE("sup-F locates a strong mid-sample break") {
  const int n = 50;
  auto s = rng::StreamFactory(44).child_stream(0);
  Eigen::MatrixXd x(n, 1);
  Eigen::VectorXd y(n);
  for (int t = 0; t < n; ++t) {
    x(t, 0) = s.normal();
    const double slope = (t + 1 >= 25) ? 6.0 : 1.0;
    y[t] = slope * x(t, 0) + s.normal();
  }
  const auto v = stats::sup_f(y, x, 0.15, 0.85);
  REQUIRE(v.aux.has_value());
  CHECK(std::abs(*v.aux - 0.5) < 0.1);
  CHECK(v.value > 50.0);  // a 5-sigma slope jump dominates the noise
}

TEST_CASE("sup-F scan validates the grid") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(20, 1);
  CHECK_THROWS_AS(stats::SupFScan(x, 0.85, 0.15), std::invalid_argument);
  CHECK_THROWS_AS(stats::SupFScan(x, 0.0, 0.85), std::invalid_argument);
  CHECK_THROWS_AS(stats::SupFScan(x, 0.15, 1.0), std::invalid_argument);
  // One observation before the first grid point is too few for m = 1 plus
  // an identified post segment when the grid starts at t = 1.
  CHECK_THROWS_AS(stats::SupFScan(x, 0.04, 0.85), std::invalid_argument);

  const stats::SupFScan scan(x, 0.15, 0.85);
  Eigen::VectorXd y_short(10);
  CHECK_THROWS_AS(static_cast<void>(scan.eval(y_short)),
                  std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(scan.suffix_gram(1)),
                  std::invalid_argument);
}
