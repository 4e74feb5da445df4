#include "randboot/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "randboot/bootstrap.hpp"
#include "randboot/diagnostics.hpp"
#include "randboot/dgp.hpp"
#include "randboot/estimators.hpp"
#include "randboot/gaussian.hpp"
#include "randboot/mc.hpp"
#include "randboot/rng.hpp"
#include "randboot/statistics.hpp"

namespace randboot::selftest {
namespace {

std::string num(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

// Plain-loop CUSUM, kept free of the library implementation on purpose.
double oracle_cusum(const std::vector<double>& e) {
  double mean = 0.0;
  for (double v : e) mean += v;
  mean /= static_cast<double>(e.size());
  double ss = 0.0;
  for (double v : e) ss += (v - mean) * (v - mean);
  const double nu = std::sqrt(ss);
  double partial = 0.0;
  double best = 0.0;
  for (double v : e) {
    partial += v - mean;
    best = std::max(best, std::abs(partial));
  }
  return best / nu;
}

void heap_permutations(std::vector<double>& e, std::size_t k,
                       const std::function<void(const std::vector<double>&)>& visit) {
  if (k <= 1) {
    visit(e);
    return;
  }
  for (std::size_t i = 0; i < k; ++i) {
    heap_permutations(e, k - 1, visit);
    std::swap(e[k % 2 == 0 ? i : 0], e[k - 1]);
  }
}

CheckResult check_stable_alpha2() {
  CheckResult out{"stable_alpha2_matches_normal", false, ""};
  const std::vector<std::uint64_t> path{1};
  rng::Stream a(7, path);
  rng::Stream b(7, path);
  const Eigen::VectorXd stable = rng::sample_symmetric_stable(a, 500, 2.0);
  const Eigen::VectorXd normal =
      std::numbers::sqrt2 * rng::sample_std_normal(b, 500);
  out.pass = (stable.array() == normal.array()).all();
  out.detail = out.pass ? "500 draws bit-identical" : "draw mismatch";
  return out;
}

CheckResult check_permutation_enumeration() {
  CheckResult out{"permutation_enumeration_matches_heap_oracle", false, ""};
  const Eigen::Vector4d e{0.31, -1.27, 0.58, 2.09};
  boot::PermutationCusumSpec spec;
  spec.mode = boot::PermutationCusumSpec::Mode::FullEnumeration;
  const auto dist = boot::permutation_cusum(e, spec, rng::StreamFactory(1));
  const Eigen::VectorXd& lib = std::get<boot::EmpiricalDist>(dist).draws;

  std::vector<double> oracle;
  std::vector<double> work(e.begin(), e.end());
  heap_permutations(work, work.size(), [&](const std::vector<double>& p) {
    oracle.push_back(oracle_cusum(p));
  });
  std::sort(oracle.begin(), oracle.end());

  if (static_cast<std::size_t>(lib.size()) != oracle.size()) {
    out.detail = "size mismatch";
    return out;
  }
  double max_diff = 0.0;
  for (Eigen::Index i = 0; i < lib.size(); ++i) {
    max_diff = std::max(max_diff,
                        std::abs(lib[i] - oracle[static_cast<std::size_t>(i)]));
  }
  out.pass = max_diff < 1e-12;
  out.detail = "24 draws, max |diff| = " + num(max_diff);
  return out;
}

CheckResult check_permutation_pvalue_exact() {
  CheckResult out{"permutation_pvalue_exact_n4", false, ""};
  const Eigen::Vector4d e{0.31, -1.27, 0.58, 2.09};
  boot::PermutationCusumSpec spec;
  spec.mode = boot::PermutationCusumSpec::Mode::FullEnumeration;
  const auto dist = boot::permutation_cusum(e, spec, rng::StreamFactory(1));
  const Eigen::VectorXd& draws = std::get<boot::EmpiricalDist>(dist).draws;
  const auto total = static_cast<int>(draws.size());

  // Treating each rearrangement as observed, the right-tail p-value equals
  // (rank from the top, counting ties)/24, so rejection counts over the full
  // group are conservative at every level and land exactly on the tie-class
  // boundaries predicted from the sorted values.
  bool ok = total == 24;
  for (int k = 1; k <= total; ++k) {
    const double q = static_cast<double>(k) / total;
    int count = 0;
    for (Eigen::Index i = 0; i < draws.size(); ++i) {
      if (boot::pvalue(dist, draws[i], boot::Tail::Right) <= q) ++count;
    }
    // Largest tie-class boundary at or below k, from the ascending draws:
    // position j (1-based from the top) ends a class if the next value up
    // the sorted order differs.
    int predicted = 0;
    for (int j = 1; j <= k; ++j) {
      const Eigen::Index pos = total - j;  // j-th largest
      if (pos == 0 || draws[pos - 1] != draws[pos]) predicted = j;
    }
    ok = ok && count == predicted && count <= k;
  }
  out.pass = ok;
  out.detail = ok ? "conservative and tie-exact at all 24 levels"
                  : "rejection count off a tie boundary";
  return out;
}

CheckResult check_permutation_uniform(bool corrupted) {
  CheckResult out{"permutation_sampler_uniform", false, ""};
  const auto biased = [](rng::Stream& stream, int n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(
          stream.uniform_below(static_cast<std::uint64_t>(i)));
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(j)]);
    }
    return perm;
  };

  const int reps = 60000;
  std::array<int, 6> counts{};
  rng::StreamFactory factory(11);
  for (int r = 1; r <= reps; ++r) {
    rng::Stream stream = factory.child_stream(static_cast<std::uint64_t>(r));
    const std::vector<int> p = corrupted
                                   ? biased(stream, 3)
                                   : rng::sample_uniform_permutation(stream, 3);
    // Lehmer index of the permutation of {0,1,2}.
    const int idx = p[0] * 2 + (p[1] > p[2] ? 1 : 0);
    ++counts[static_cast<std::size_t>(idx)];
  }
  const double expected = reps / 6.0;
  double chi2 = 0.0;
  for (int c : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
  }
  out.pass = chi2 < 20.5;  // 99.9% quantile of chi-square(5)
  out.detail = "chi2(5) = " + num(chi2);
  return out;
}

CheckResult check_constrained_ols_grid() {
  CheckResult out{"constrained_ols_matches_grid_oracle", false, ""};
  const int n = 40;
  rng::Stream stream(21, std::vector<std::uint64_t>{1});
  Eigen::MatrixXd x(n, 2);
  x.col(0).setOnes();
  x.col(1) = rng::sample_std_normal(stream, n);
  const Eigen::VectorXd y = 0.4 * x.col(0) + 0.2 * x.col(1) +
                            rng::sample_std_normal(stream, n);

  est::AffineConstraint con;
  con.a = Eigen::Vector2d{1.0, 2.0};
  con.b = -0.3;
  const est::OlsFit free_fit = est::ols(y, x);
  con.c = con.value(free_fit.coef) + 0.25;  // force the bound to bind

  const est::OlsFit fit = est::constrained_ols(y, x, con);

  // Oracle: the minimizer lies on { a'theta + b = c }; parameterize the line
  // and minimize the (exactly quadratic) SSR by coarse grid plus one
  // quadratic interpolation step.
  const Eigen::Vector2d point =
      con.a * (con.c - con.b) / con.a.squaredNorm();
  const Eigen::Vector2d dir{-con.a[1], con.a[0]};
  const auto ssr_at = [&](double t) {
    const Eigen::Vector2d theta = point + t * dir;
    return (y - x * theta).squaredNorm();
  };
  double best_t = 0.0;
  double best_val = ssr_at(0.0);
  for (int i = -2000; i <= 2000; ++i) {
    const double t = i * 0.005;
    const double v = ssr_at(t);
    if (v < best_val) {
      best_val = v;
      best_t = t;
    }
  }
  const double h = 0.005;
  const double f0 = ssr_at(best_t - h);
  const double f1 = ssr_at(best_t);
  const double f2 = ssr_at(best_t + h);
  const double t_star = best_t + 0.5 * h * (f0 - f2) / (f0 - 2 * f1 + f2);
  const Eigen::Vector2d oracle = point + t_star * dir;

  const double coef_diff = (fit.coef - oracle).cwiseAbs().maxCoeff();
  const double ssr_diff = std::abs(fit.ssr - ssr_at(t_star));
  out.pass = coef_diff < 1e-6 && ssr_diff < 1e-6 &&
             std::abs(con.value(fit.coef) - con.c) < 1e-10;
  out.detail = "max |coef diff| = " + num(coef_diff) +
               ", |ssr diff| = " + num(ssr_diff);
  return out;
}

CheckResult check_ks_grid() {
  CheckResult out{"ks_stat_matches_grid_oracle", false, ""};
  const int n = 27;
  rng::Stream stream(33, std::vector<std::uint64_t>{1});
  const Eigen::VectorXd resid =
      (rng::sample_std_normal(stream, n).array() + 0.3).matrix();
  const double lib = stats::ks_stat(resid, gauss::cdf).value;

  std::vector<double> sorted(resid.begin(), resid.end());
  std::sort(sorted.begin(), sorted.end());
  const auto ecdf_at = [&](double v) {
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(),
                                                v) -
                               sorted.begin()) /
           static_cast<double>(n);
  };
  std::vector<double> grid;
  for (int i = 0; i <= 10000; ++i) {
    grid.push_back(sorted.front() - 0.5 +
                   (sorted.back() - sorted.front() + 1.0) * i / 10000.0);
  }
  for (double v : sorted) {
    grid.push_back(v);
    grid.push_back(v - 1e-9);
  }
  double sup = 0.0;
  for (double v : grid) {
    sup = std::max(sup, std::abs(ecdf_at(v) - gauss::cdf(v)));
  }
  const double oracle = std::sqrt(static_cast<double>(n)) * sup;
  out.pass = std::abs(lib - oracle) < 1e-6;
  out.detail = "|diff| = " + num(std::abs(lib - oracle));
  return out;
}

CheckResult check_analytic_vs_empirical() {
  CheckResult out{"analytic_matches_empirical_gaussian", false, ""};
  rng::Stream stream(5, std::vector<std::uint64_t>{0});
  const dgp::SampleDraw sample =
      dgp::simulate(dgp::IidGaussian{0.0}, 50, stream);
  const est::OlsFit fit = est::ols(sample.y, sample.x);
  const double tau = stats::slope_stat(fit, 0.0, 2.0, 50).value;

  boot::FixedDesignGaussianSpec analytic;
  analytic.analytic = true;
  boot::FixedDesignGaussianSpec empirical;
  empirical.analytic = false;
  empirical.b = 100000;
  const rng::StreamFactory streams = rng::StreamFactory(5).child(1);
  const double pa = boot::pvalue(
      boot::fixed_design_gaussian(fit, sample.x.col(0), analytic, streams),
      tau, boot::Tail::Left);
  const double pe = boot::pvalue(
      boot::fixed_design_gaussian(fit, sample.x.col(0), empirical, streams),
      tau, boot::Tail::Left);
  out.pass = std::abs(pa - pe) < 0.01;
  out.detail = "analytic " + num(pa) + " vs empirical " + num(pe);
  return out;
}

mc::Experiment small_experiment() {
  mc::Experiment exp;
  exp.dgp = dgp::IidGaussian{0.0};
  boot::FixedDesignGaussianSpec scheme;
  scheme.analytic = false;
  scheme.b = 199;
  exp.scheme = scheme;
  exp.statistic = mc::Statistic::Slope;
  exp.tail = boot::Tail::Left;
  exp.n = 20;
  return exp;
}

CheckResult check_rerun_identical() {
  CheckResult out{"rerun_bit_identical", false, ""};
  const mc::Experiment exp = small_experiment();
  const std::vector<double> a = mc::run_unconditional(exp, 60, 9, 1);
  const std::vector<double> b = mc::run_unconditional(exp, 60, 9, 1);
  out.pass = a == b;
  out.detail = out.pass ? "60 reps identical" : "rerun drifted";
  return out;
}

CheckResult check_thread_invariance() {
  CheckResult out{"thread_count_invariance", false, ""};
  const mc::Experiment exp = small_experiment();
  const std::vector<double> a = mc::run_unconditional(exp, 60, 9, 1);
  const std::vector<double> b = mc::run_unconditional(exp, 60, 9, 3);
  out.pass = a == b;
  out.detail = out.pass ? "1 vs 3 threads identical" : "schedule leaked into results";
  return out;
}

CheckResult check_panel_rows() {
  CheckResult out{"panel_rows_valid_cdfs", false, ""};
  mc::Experiment exp;
  exp.dgp = dgp::ArchBivariate{0.0};
  exp.scheme = boot::FixedDesignGaussianSpec{};
  exp.statistic = mc::Statistic::Slope;
  exp.tail = boot::Tail::Left;
  exp.n = 15;
  const mc::ConditionalEcdfPanel panel = mc::run_double(exp, 6, 40, 21, 13, 1);
  bool ok = true;
  for (Eigen::Index m = 0; m < panel.rows.rows(); ++m) {
    double prev = 0.0;
    for (Eigen::Index j = 0; j < panel.grid.size(); ++j) {
      const double v = panel.rows(m, j);
      if (v < prev || v < 0.0 || v > 1.0) ok = false;
      prev = v;
    }
    if (panel.rows(m, panel.grid.size() - 1) != 1.0) ok = false;
  }
  out.pass = ok;
  out.detail = ok ? "6 rows monotone in [0,1], end at 1" : "invalid cdf row";
  return out;
}

CheckResult check_power_oracle() {
  CheckResult out{"local_power_oracle_limits", false, ""};
  const auto oracle = [](double b) {
    rng::Stream stream(17, std::vector<std::uint64_t>{0, 0});
    return diag::local_power_oracle(b, 0.05, 2000, 200, stream);
  };
  const double at0 = oracle(0.0);
  const double p2 = oracle(-2.0);
  const double p5 = oracle(-5.0);
  const double p10 = oracle(-10.0);
  const double far = oracle(50.0);
  out.pass = std::abs(at0 - 0.05) < 1e-12 && p2 < p5 && p5 < p10 &&
             far < 0.01;
  out.detail = "P(b=0) = " + num(at0) + ", curve " + num(p2) + " < " +
               num(p5) + " < " + num(p10) + ", P(b=50) = " + num(far);
  return out;
}

CheckResult check_supf_refit() {
  CheckResult out{"supf_matches_independent_refits", false, ""};
  const int n = 60;
  rng::Stream stream(29, std::vector<std::uint64_t>{0});
  const dgp::SampleDraw sample = dgp::simulate(
      dgp::BreakRegression{1.0, 1.5, 0.5,
                           dgp::BreakRegressorKind::IidStationary,
                           dgp::BreakErrorKind::Homoskedastic},
      n, stream);
  const stats::StatValue scan = stats::sup_f(sample.y, sample.x, 0.15, 0.85);

  double best = -1.0;
  const int t_lo = static_cast<int>(std::floor(0.15 * n));
  const int t_hi = static_cast<int>(std::floor(0.85 * n));
  for (int t = t_lo; t <= t_hi; ++t) {
    const est::BreakFit fit =
        est::break_fit(sample.y, sample.x, (t + 0.5) / static_cast<double>(n));
    if (fit.t_break != t) {
      out.detail = "refit landed on wrong break point";
      return out;
    }
    best = std::max(best, fit.f_stat);
    if (fit.f_stat > scan.value + 1e-8) {
      out.detail = "scan smaller than refit at t = " + std::to_string(t);
      return out;
    }
  }
  out.pass = std::abs(best - scan.value) < 1e-8;
  out.detail = "max |diff| = " + num(std::abs(best - scan.value));
  return out;
}

}  // namespace

std::vector<CheckResult> run_all(const std::string& corrupt) {
  std::vector<CheckResult> results;
  results.push_back(check_stable_alpha2());
  results.push_back(check_permutation_enumeration());
  results.push_back(check_permutation_pvalue_exact());
  results.push_back(
      check_permutation_uniform(corrupt == "permutation_sampler_uniform"));
  results.push_back(check_constrained_ols_grid());
  results.push_back(check_ks_grid());
  results.push_back(check_analytic_vs_empirical());
  results.push_back(check_rerun_identical());
  results.push_back(check_thread_invariance());
  results.push_back(check_panel_rows());
  results.push_back(check_power_oracle());
  results.push_back(check_supf_refit());
  return results;
}

}  // namespace randboot::selftest
