#include "randboot/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "randboot/gaussian.hpp"

namespace randboot::boot {
namespace {

void require_b(int b) {
  if (b < 99) throw std::invalid_argument("bootstrap: need b >= 99 replicates");
}

EmpiricalDist sorted_dist(std::vector<double> draws) {
  std::sort(draws.begin(), draws.end());
  return EmpiricalDist{
      Eigen::Map<const Eigen::VectorXd>(draws.data(),
                                        static_cast<Eigen::Index>(draws.size()))};
}

}  // namespace

double pvalue(const BootstrapDistribution& dist, double tau, Tail tail) {
  if (const auto* analytic = std::get_if<AnalyticNormalCdf>(&dist)) {
    if (!(analytic->scale > 0.0)) {
      throw std::invalid_argument("pvalue: analytic scale must be positive");
    }
    const double z = tau / analytic->scale;
    return tail == Tail::Left ? gauss::cdf(z) : gauss::cdf(-z);
  }
  const auto& draws = std::get<EmpiricalDist>(dist).draws;
  const auto b = static_cast<double>(draws.size());
  if (draws.size() == 0) throw std::invalid_argument("pvalue: empty draw set");
  if (tail == Tail::Left) {
    const auto count =
        std::upper_bound(draws.begin(), draws.end(), tau) - draws.begin();
    return static_cast<double>(count) / b;
  }
  const auto below =
      std::lower_bound(draws.begin(), draws.end(), tau) - draws.begin();
  return static_cast<double>(draws.size() - below) / b;
}

BootstrapDistribution fixed_design_gaussian(const est::OlsFit& fit,
                                            const Eigen::VectorXd& x,
                                            const FixedDesignGaussianSpec& spec,
                                            const rng::StreamFactory& streams) {
  if (fit.coef.size() != 1) {
    throw std::invalid_argument("fixed_design_gaussian: fit must be univariate");
  }
  const auto n = static_cast<int>(x.size());
  const double m_n = fit.gram(0, 0);
  if (!(m_n > 0.0)) {
    throw std::invalid_argument("fixed_design_gaussian: degenerate design");
  }
  const double omega = spec.known_omega.value_or(fit.sigma2_hat);
  if (!(omega > 0.0)) {
    throw std::invalid_argument("fixed_design_gaussian: error variance must be positive");
  }
  const double rate = std::pow(static_cast<double>(n), 0.5 * spec.alpha_exp);
  if (spec.analytic) {
    return AnalyticNormalCdf{rate * std::sqrt(omega / m_n)};
  }
  require_b(spec.b);
  // beta*_hat - beta_hat = M_n^{-1} sum_t x_t omega^{1/2} eps*_t; drawing the
  // statistic through this identity is exact, no refit needed.
  std::vector<double> draws(static_cast<std::size_t>(spec.b));
  const double scale = rate * std::sqrt(omega) / m_n;
  for (int b = 1; b <= spec.b; ++b) {
    rng::Stream stream = streams.child_stream(static_cast<std::uint64_t>(b));
    double dot = 0.0;
    for (int t = 0; t < n; ++t) dot += x[t] * stream.normal();
    draws[static_cast<std::size_t>(b - 1)] = scale * dot;
  }
  return sorted_dist(std::move(draws));
}

BootstrapDistribution permutation_cusum(const Eigen::VectorXd& e,
                                        const PermutationCusumSpec& spec,
                                        const rng::StreamFactory& streams) {
  const auto n = static_cast<int>(e.size());
  if (n < 2) throw std::invalid_argument("permutation_cusum: need n >= 2");
  const bool full =
      spec.mode == PermutationCusumSpec::Mode::FullEnumeration ||
      (spec.mode == PermutationCusumSpec::Mode::Auto && n <= 8);
  if (full && n > 8) {
    throw std::invalid_argument("permutation_cusum: full enumeration limited to n <= 8");
  }

  std::vector<double> draws;
  Eigen::VectorXd permuted(n);
  if (full) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    do {
      for (int i = 0; i < n; ++i) permuted[i] = e[idx[static_cast<std::size_t>(i)]];
      draws.push_back(stats::cusum_stat(permuted, spec.nu).value);
    } while (std::next_permutation(idx.begin(), idx.end()));
  } else {
    require_b(spec.b);
    draws.reserve(static_cast<std::size_t>(spec.b));
    for (int b = 1; b <= spec.b; ++b) {
      rng::Stream stream = streams.child_stream(static_cast<std::uint64_t>(b));
      const std::vector<int> perm = rng::sample_uniform_permutation(stream, n);
      for (int i = 0; i < n; ++i) permuted[i] = e[perm[static_cast<std::size_t>(i)]];
      draws.push_back(stats::cusum_stat(permuted, spec.nu).value);
    }
  }
  return sorted_dist(std::move(draws));
}

BootstrapDistribution parametric_ks(const Eigen::MatrixXd& x,
                                    const ParametricKsSpec& spec,
                                    const rng::StreamFactory& streams) {
  require_b(spec.b);
  const auto n = x.rows();
  if (n < 1) throw std::invalid_argument("parametric_ks: need n >= 1");
  std::optional<est::LeastSquares> ls;
  if (x.cols() > 0) ls.emplace(x);

  std::vector<double> draws(static_cast<std::size_t>(spec.b));
  for (int b = 1; b <= spec.b; ++b) {
    rng::Stream stream = streams.child_stream(static_cast<std::uint64_t>(b));
    const Eigen::VectorXd eps = rng::sample_std_normal(stream, n);
    const Eigen::VectorXd resid = ls ? ls->solve(eps).residuals : eps;
    draws[static_cast<std::size_t>(b - 1)] =
        stats::ks_stat(resid, gauss::cdf).value;
  }
  return sorted_dist(std::move(draws));
}

BootstrapDistribution boundary_wild(const dgp::SampleDraw& sample,
                                    const est::OlsFit& constrained_fit,
                                    const est::AffineConstraint& con,
                                    const BoundaryWildSpec& spec,
                                    const rng::StreamFactory& streams) {
  require_b(spec.b);
  const auto n = sample.y.size();
  if (sample.x.cols() != 2 || constrained_fit.coef.size() != 3 ||
      con.a.size() != 3) {
    throw std::invalid_argument("boundary_wild: expected predictive layout");
  }
  if (con.a[2] != 0.0) {
    throw std::invalid_argument(
        "boundary_wild: constraint must not load on the dropped regressor");
  }
  const double g_hat = con.value(constrained_fit.coef);

  double bound = 0.0;
  switch (spec.kind) {
    case BoundaryKind::Standard:
      bound = 0.0;
      break;
    case BoundaryKind::Restricted:
      bound = g_hat;
      break;
    case BoundaryKind::Shrinking:
      if (!(spec.kappa > 0.0)) {
        throw std::invalid_argument("boundary_wild: kappa must be positive");
      }
      bound = g_hat - std::pow(std::abs(g_hat), 1.0 + spec.kappa);
      break;
  }

  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = sample.x.col(0);
  const est::LeastSquares ls(design);

  est::AffineConstraint boot_con;
  boot_con.a = con.a.head(2);
  boot_con.b = con.b;
  boot_con.c = bound;

  const Eigen::VectorXd fitted = design * constrained_fit.coef.head(2);
  const double root_n = std::sqrt(static_cast<double>(n));

  std::vector<double> draws(static_cast<std::size_t>(spec.b));
  Eigen::VectorXd ystar(n);
  for (int b = 1; b <= spec.b; ++b) {
    rng::Stream stream = streams.child_stream(static_cast<std::uint64_t>(b));
    for (Eigen::Index t = 0; t < n; ++t) {
      ystar[t] = fitted[t] + constrained_fit.residuals[t] * stream.normal();
    }
    const est::OlsFit star = ls.solve_constrained(ystar, boot_con);
    draws[static_cast<std::size_t>(b - 1)] =
        root_n * (boot_con.value(star.coef) - g_hat);
  }
  return sorted_dist(std::move(draws));
}

BootstrapDistribution supf_wild(const Eigen::VectorXd& y,
                                const Eigen::MatrixXd& x,
                                const SupFWildSpec& spec,
                                const rng::StreamFactory& streams) {
  require_b(spec.b);
  const auto n = x.rows();
  const stats::SupFScan scan(x, spec.r_lo, spec.r_hi);
  int t_tilde = 0;
  static_cast<void>(scan.eval(y, &t_tilde));
  const Eigen::VectorXd resid =
      est::ols(y, est::break_design(x, t_tilde)).residuals;

  std::vector<double> draws(static_cast<std::size_t>(spec.b));
  Eigen::VectorXd ystar(n);
  for (int b = 1; b <= spec.b; ++b) {
    rng::Stream stream = streams.child_stream(static_cast<std::uint64_t>(b));
    for (Eigen::Index t = 0; t < n; ++t) ystar[t] = resid[t] * stream.normal();
    draws[static_cast<std::size_t>(b - 1)] = scan.eval(ystar).value;
  }
  return sorted_dist(std::move(draws));
}

}  // namespace randboot::boot
