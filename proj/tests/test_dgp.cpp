#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "randboot/dgp.hpp"
#include "randboot/gaussian.hpp"
#include "randboot/rng.hpp"

namespace dgp = randboot::dgp;
namespace rng = randboot::rng;
namespace gauss = randboot::gauss;

namespace {

rng::Stream stream_at(std::uint64_t seed, std::uint64_t leaf) {
  return rng::StreamFactory(seed).child_stream(leaf);
}

double ks_vs_std_normal(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = static_cast<double>(v.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = gauss::cdf(v[i]);
    sup = std::max(sup, std::max((i + 1.0) / n - f, f - i / n));
  }
  return sup;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double sup = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    sup = std::max(sup, std::abs(i / static_cast<double>(a.size()) -
                                 j / static_cast<double>(b.size())));
  }
  return sup;
}

}  // namespace

TEST_CASE("cointegration layout: x cumulates eta and y obeys the slope") {
  auto s = stream_at(10, 0);
  const auto d = dgp::simulate(dgp::IidGaussian{0.7}, 50, s);
  REQUIRE(d.x.rows() == 50);
  REQUIRE(d.x.cols() == 1);
  double csum = 0.0;
  for (int t = 0; t < 50; ++t) {
    csum += d.eta[t];
    CHECK(d.x(t, 0) == doctest::Approx(csum).epsilon(1e-12));
    CHECK(d.y[t] == doctest::Approx(0.7 * d.x(t, 0) + d.eps[t]).epsilon(1e-12));
  }
}

TEST_CASE("infinite variance design has no regressors and y equals eps") {
  auto s = stream_at(11, 0);
  const auto d = dgp::simulate(dgp::InfiniteVarianceIid{1.2}, 30, s);
  CHECK(d.x.rows() == 30);
  CHECK(d.x.cols() == 0);
  CHECK(d.eta.size() == 0);
  CHECK((d.y - d.eps).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("predictive layout chains the lagged level and the increment") {
  auto s = stream_at(12, 0);
  const auto d =
      dgp::simulate(dgp::PredictiveRegression{0.4, 1.5, 10.0}, 40, s);
  REQUIRE(d.x.cols() == 2);
  CHECK(d.x(0, 0) == 0.0);  // x_0 = 0
  for (int t = 0; t + 1 < 40; ++t) {
    CHECK(d.x(t + 1, 0) ==
          doctest::Approx(d.x(t, 0) + d.x(t, 1)).epsilon(1e-12));
  }
  for (int t = 0; t < 40; ++t) {
    CHECK(d.y[t] ==
          doctest::Approx(0.4 + 1.5 * d.x(t, 0) + d.eps[t]).epsilon(1e-12));
  }
}

TEST_CASE("arch recursion: standardized innovations are standard normal") {
  auto s = stream_at(13, 0);
  const int n = 5000;
  const auto d = dgp::simulate(dgp::ArchBivariate{0.0}, n, s);

  std::vector<double> zeta(n), xi(n);
  double eps_prev_sq = 2.5;
  double eta_prev_sq = 2.5;
  for (int t = 0; t < n; ++t) {
    zeta[t] = d.eps[t] / std::sqrt(1.0 + 0.3 * eps_prev_sq + 0.3 * eta_prev_sq);
    xi[t] = d.eta[t] / std::sqrt(1.0 + 0.6 * eta_prev_sq);
    eps_prev_sq = d.eps[t] * d.eps[t];
    eta_prev_sq = d.eta[t] * d.eta[t];
  }
  CHECK(ks_vs_std_normal(zeta) < 1.63 / std::sqrt(n));
  CHECK(ks_vs_std_normal(xi) < 1.63 / std::sqrt(n));
}

TEST_CASE("endogenous sign design scales eta by 1 + delta on eps <= 0") {
  auto s = stream_at(14, 0);
  const int n = 100000;
  const auto d = dgp::simulate(dgp::EndogenousSign{9.0, 0.0}, n, s);

  std::vector<double> neg_branch, pos_branch;
  for (int t = 0; t < n; ++t) {
    if (d.eps[t] <= 0.0) {
      neg_branch.push_back(d.eta[t] / 10.0);
    } else {
      pos_branch.push_back(d.eta[t]);
    }
  }
  // Roughly half the draws land on each branch, and the rescaled eta is
  // standard normal on both.
  CHECK(std::abs(static_cast<double>(neg_branch.size()) / n - 0.5) < 0.01);
  CHECK(ks_vs_std_normal(neg_branch) < 1.63 / std::sqrt(neg_branch.size()));
  CHECK(ks_vs_std_normal(pos_branch) < 1.63 / std::sqrt(pos_branch.size()));
}

TEST_CASE("sign-flip probability: closed form and limits") {
  // delta = 0 removes the feedback entirely.
  for (double eta : {-3.0, 0.0, 0.4, 7.0}) {
    CHECK(dgp::endogenous_sign_flip_prob(eta, 0.0) == doctest::Approx(0.5));
  }
  // At eta = 0 the likelihood ratio is 1/(1+delta), so the posterior is
  // 1/(2+delta).
  CHECK(dgp::endogenous_sign_flip_prob(0.0, 9.0) ==
        doctest::Approx(1.0 / 11.0).epsilon(1e-12));
  // Large |eta| pins the wide branch.
  CHECK(dgp::endogenous_sign_flip_prob(10.0, 9.0) > 0.999);
  double prev = 0.0;
  for (double eta = 0.0; eta <= 5.0; eta += 0.25) {
    const double p = dgp::endogenous_sign_flip_prob(eta, 9.0);
    CHECK(p >= prev);
    CHECK(p == dgp::endogenous_sign_flip_prob(-eta, 9.0));
    prev = p;
  }
}

TEST_CASE("conditional redraw matches the posterior sign rate at fixed eta") {
  dgp::SampleDraw base;
  base.eta.resize(1);
  base.eta << 1.0;
  base.x.resize(1, 1);
  base.x << 1.0;
  base.eps.resize(1);
  base.y.resize(1);

  const double p = dgp::endogenous_sign_flip_prob(1.0, 9.0);
  auto s = stream_at(15, 0);
  const int reps = 20000;
  int neg = 0;
  for (int r = 0; r < reps; ++r) {
    const auto redraw =
        dgp::simulate_conditional_iii(dgp::EndogenousSign{9.0, 0.0}, base, s);
    if (redraw.eps[0] <= 0.0) ++neg;
  }
  CHECK(std::abs(static_cast<double>(neg) / reps - p) < 0.01);
}

TEST_CASE("conditional redraw reproduces the joint law of (eps, eta)") {
  const dgp::EndogenousSign spec{9.0, 0.0};
  const int draws = 100000;
  auto s_base = stream_at(16, 0);
  auto s_cond = stream_at(16, 1);

  std::vector<double> eps_u, prod_u, eps_c, prod_c;
  eps_u.reserve(draws);
  for (int r = 0; r < draws; ++r) {
    const auto base = dgp::simulate(spec, 1, s_base);
    const auto redraw = dgp::simulate_conditional_iii(spec, base, s_cond);
    CHECK(redraw.eta[0] == base.eta[0]);
    eps_u.push_back(base.eps[0]);
    prod_u.push_back(base.eps[0] * base.eta[0]);
    eps_c.push_back(redraw.eps[0]);
    prod_c.push_back(redraw.eps[0] * redraw.eta[0]);
  }
  // Marginal of the redrawn eps must stay standard normal, and the
  // cross-moment law (which carries the sign dependence) must agree between
  // the one-shot and the conditional draws.
  CHECK(ks_vs_std_normal(eps_c) < 1.63 / std::sqrt(draws));
  CHECK(ks_two_sample(prod_u, prod_c) < 1.628 * std::sqrt(2.0 / draws));
  CHECK(ks_two_sample(eps_u, eps_c) < 1.628 * std::sqrt(2.0 / draws));
}

TEST_CASE("conditional dispatcher holds the regressor path fixed") {
  for (const dgp::DgpSpec spec :
       {dgp::DgpSpec(dgp::IidGaussian{0.5}), dgp::DgpSpec(dgp::ArchBivariate{0.5}),
        dgp::DgpSpec(dgp::EndogenousSign{9.0, 0.5})}) {
    auto s = stream_at(17, 0);
    const auto base = dgp::simulate(spec, 60, s);
    auto s2 = stream_at(17, 1);
    const auto redraw = dgp::simulate_conditional(spec, base, s2);
    CHECK((redraw.x - base.x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((redraw.eta - base.eta).cwiseAbs().maxCoeff() == 0.0);
    CHECK((redraw.y - (0.5 * redraw.x.col(0) + redraw.eps)).cwiseAbs().maxCoeff() <
          1e-12);
    // New errors, not a copy.
    CHECK((redraw.eps - base.eps).cwiseAbs().maxCoeff() > 1e-3);
  }
}

TEST_CASE("arch conditional redraw keeps the correct volatility recursion") {
  auto s = stream_at(18, 0);
  const auto base = dgp::simulate(dgp::ArchBivariate{0.0}, 5000, s);
  auto s2 = stream_at(18, 1);
  const auto redraw =
      dgp::simulate_conditional(dgp::ArchBivariate{0.0}, base, s2);

  // The redraw recursion feeds back its own eps lags but the base eta lags.
  std::vector<double> zeta(5000);
  double eps_prev_sq = 2.5;
  double eta_prev_sq = 2.5;
  for (int t = 0; t < 5000; ++t) {
    zeta[t] = redraw.eps[t] /
              std::sqrt(1.0 + 0.3 * eps_prev_sq + 0.3 * eta_prev_sq);
    eps_prev_sq = redraw.eps[t] * redraw.eps[t];
    eta_prev_sq = base.eta[t] * base.eta[t];
  }
  CHECK(ks_vs_std_normal(zeta) < 1.63 / std::sqrt(5000.0));
}

TEST_CASE("conditional sampler availability matches the design") {
  CHECK(dgp::has_conditional_sampler(dgp::IidGaussian{}));
  CHECK(dgp::has_conditional_sampler(dgp::CointegrationRW{}));
  CHECK(dgp::has_conditional_sampler(dgp::ArchBivariate{}));
  CHECK(dgp::has_conditional_sampler(dgp::EndogenousSign{}));
  CHECK_FALSE(dgp::has_conditional_sampler(dgp::InfiniteVarianceIid{}));
  CHECK_FALSE(dgp::has_conditional_sampler(dgp::PredictiveRegression{}));
  CHECK_FALSE(dgp::has_conditional_sampler(dgp::BreakRegression{}));

  auto s = stream_at(19, 0);
  const auto base = dgp::simulate(dgp::PredictiveRegression{}, 20, s);
  auto s2 = stream_at(19, 1);
  CHECK_THROWS_AS(
      dgp::simulate_conditional(dgp::PredictiveRegression{}, base, s2),
      std::invalid_argument);
}

TEST_CASE("break regression: zero break size reduces to the stable slope") {
  dgp::BreakRegression with_break;
  with_break.beta1 = 1.0;
  with_break.theta = 0.0;
  with_break.r_star = 0.5;
  dgp::BreakRegression no_break;
  no_break.beta1 = 1.0;

  auto s1 = stream_at(20, 0);
  auto s2 = stream_at(20, 0);
  const auto a = dgp::simulate(dgp::DgpSpec(with_break), 64, s1);
  const auto b = dgp::simulate(dgp::DgpSpec(no_break), 64, s2);
  CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("break regression: the slope shifts exactly at floor(r n)") {
  dgp::BreakRegression spec;
  spec.beta1 = 1.0;
  spec.theta = 3.0;
  spec.r_star = 0.5;
  dgp::BreakRegression null_spec = spec;
  null_spec.theta = 0.0;

  const int n = 64;
  auto s1 = stream_at(21, 0);
  auto s2 = stream_at(21, 0);
  const auto broke = dgp::simulate(dgp::DgpSpec(spec), n, s1);
  const auto flat = dgp::simulate(dgp::DgpSpec(null_spec), n, s2);
  const int t_break = 32;  // floor(0.5 * 64), 1-based
  for (int t = 0; t < n; ++t) {
    const double shift = (t + 1 >= t_break) ? 3.0 * broke.x(t, 0) : 0.0;
    CHECK(broke.y[t] == doctest::Approx(flat.y[t] + shift).epsilon(1e-12));
  }
}

TEST_CASE("break regression: variance shift doubles the regressor variance") {
  dgp::BreakRegression shifted;
  shifted.regressor = dgp::BreakRegressorKind::VarianceShift;
  dgp::BreakRegression plain;

  const int n = 64;
  auto s1 = stream_at(22, 0);
  auto s2 = stream_at(22, 0);
  const auto a = dgp::simulate(dgp::DgpSpec(shifted), n, s1);
  const auto b = dgp::simulate(dgp::DgpSpec(plain), n, s2);
  for (int t = 0; t < n; ++t) {
    const double factor = t >= n / 2 ? std::numbers::sqrt2 : 1.0;
    CHECK(a.x(t, 0) == doctest::Approx(factor * b.x(t, 0)).epsilon(1e-12));
  }
}

TEST_CASE("break regression: garch errors standardize to white noise") {
  dgp::BreakRegression spec;
  spec.errors = dgp::BreakErrorKind::Garch;
  auto s = stream_at(23, 0);
  const int n = 5000;
  const auto d = dgp::simulate(dgp::DgpSpec(spec), n, s);

  std::vector<double> z(n);
  double h = 1.0;
  for (int t = 0; t < n; ++t) {
    if (t > 0) h = 0.1 + 0.2 * d.eps[t - 1] * d.eps[t - 1] + 0.7 * h;
    z[t] = d.eps[t] / std::sqrt(h);
  }
  CHECK(ks_vs_std_normal(z) < 1.63 / std::sqrt(n));
}

TEST_CASE("slope accessors cover exactly the cointegration designs") {
  CHECK(dgp::slope_of(dgp::IidGaussian{0.3}) == 0.3);
  CHECK(dgp::slope_of(dgp::ArchBivariate{-1.0}) == -1.0);
  CHECK(dgp::slope_of(dgp::EndogenousSign{9.0, 0.25}) == 0.25);
  CHECK(dgp::slope_of(dgp::CointegrationRW{2.0}) == 2.0);
  CHECK_FALSE(dgp::slope_of(dgp::InfiniteVarianceIid{}).has_value());
  CHECK_FALSE(dgp::slope_of(dgp::BreakRegression{}).has_value());

  const auto moved = dgp::with_slope(dgp::IidGaussian{0.0}, 0.9);
  CHECK(dgp::slope_of(moved) == 0.9);
  CHECK_THROWS_AS(dgp::with_slope(dgp::InfiniteVarianceIid{}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("simulate validates its arguments") {
  auto s = stream_at(24, 0);
  CHECK_THROWS_AS(dgp::simulate(dgp::IidGaussian{}, 0, s),
                  std::invalid_argument);
  CHECK_THROWS_AS(dgp::simulate(dgp::InfiniteVarianceIid{2.0}, 10, s),
                  std::invalid_argument);
  dgp::BreakRegression bad;
  bad.r_star = 1.0;
  CHECK_THROWS_AS(dgp::simulate(dgp::DgpSpec(bad), 10, s),
                  std::invalid_argument);
  CHECK_THROWS_AS(dgp::simulate(dgp::EndogenousSign{-1.0, 0.0}, 10, s),
                  std::invalid_argument);
}
