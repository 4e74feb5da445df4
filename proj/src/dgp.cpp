#include "randboot/dgp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace randboot::dgp {
namespace {

// Unconditional second moment of both ARCH recursions:
// E eta^2 = 1 / (1 - 0.6) = 2.5 and E eps^2 = (1 + 0.3 * 2.5) / (1 - 0.3).
constexpr double kArchInitVar = 2.5;

void require_n(int n) {
  if (n < 1) throw std::invalid_argument("simulate: n must be >= 1");
}

SampleDraw cointegration_from_paths(double beta, const Eigen::VectorXd& eps,
                                    const Eigen::VectorXd& eta) {
  SampleDraw out;
  out.eps = eps;
  out.eta = eta;
  out.x.resize(eta.size(), 1);
  double csum = 0.0;
  for (Eigen::Index t = 0; t < eta.size(); ++t) {
    csum += eta[t];
    out.x(t, 0) = csum;
  }
  out.y = beta * out.x.col(0) + eps;
  return out;
}

SampleDraw simulate_iid_gaussian(double beta, int n, rng::Stream& stream) {
  Eigen::VectorXd eps(n), eta(n);
  for (int t = 0; t < n; ++t) {
    eps[t] = stream.normal();
    eta[t] = stream.normal();
  }
  return cointegration_from_paths(beta, eps, eta);
}

SampleDraw simulate_arch(double beta, int n, rng::Stream& stream) {
  Eigen::VectorXd eps(n), eta(n);
  double eps_prev_sq = kArchInitVar;
  double eta_prev_sq = kArchInitVar;
  for (int t = 0; t < n; ++t) {
    const double zeta = stream.normal();
    const double xi = stream.normal();
    eps[t] = zeta * std::sqrt(1.0 + 0.3 * eps_prev_sq + 0.3 * eta_prev_sq);
    eta[t] = xi * std::sqrt(1.0 + 0.6 * eta_prev_sq);
    eps_prev_sq = eps[t] * eps[t];
    eta_prev_sq = eta[t] * eta[t];
  }
  return cointegration_from_paths(beta, eps, eta);
}

SampleDraw simulate_endogenous_sign(const EndogenousSign& spec, int n,
                                    rng::Stream& stream) {
  if (spec.delta < 0.0) {
    throw std::invalid_argument("EndogenousSign: delta must be >= 0");
  }
  Eigen::VectorXd eps(n), eta(n);
  for (int t = 0; t < n; ++t) {
    eps[t] = stream.normal();
    const double xi = stream.normal();
    eta[t] = xi * (1.0 + spec.delta * (eps[t] <= 0.0 ? 1.0 : 0.0));
  }
  return cointegration_from_paths(spec.beta, eps, eta);
}

SampleDraw simulate_predictive(const PredictiveRegression& spec, int n,
                               rng::Stream& stream) {
  const double rho = 1.0 - spec.c / n;
  SampleDraw out;
  out.eps.resize(n);
  out.eta.resize(n);
  out.x.resize(n, 2);
  out.y.resize(n);
  double x_prev = 0.0;
  for (int t = 0; t < n; ++t) {
    const double u = stream.normal();
    const double e = stream.normal();
    const double x_t = rho * x_prev + u;
    out.eta[t] = u;
    out.eps[t] = e;
    out.x(t, 0) = x_prev;
    out.x(t, 1) = x_t - x_prev;
    out.y[t] = spec.theta1 + spec.theta2 * x_prev + e;
    x_prev = x_t;
  }
  return out;
}

SampleDraw simulate_break(const BreakRegression& spec, int n,
                          rng::Stream& stream) {
  if (spec.r_star && !(*spec.r_star > 0.0 && *spec.r_star < 1.0)) {
    throw std::invalid_argument("BreakRegression: r_star must lie in (0, 1)");
  }
  const int t_break =
      spec.r_star ? static_cast<int>(std::floor(*spec.r_star * n)) : n + 1;
  SampleDraw out;
  out.eps.resize(n);
  out.eta.resize(n);
  out.x.resize(n, 1);
  out.y.resize(n);
  double h = 1.0;
  double eps_prev = 0.0;
  for (int t = 0; t < n; ++t) {
    const double w = stream.normal();
    const double zeta = stream.normal();
    out.eta[t] = w;
    const bool second_half = t >= n / 2;
    out.x(t, 0) = w * (spec.regressor == BreakRegressorKind::VarianceShift &&
                               second_half
                           ? std::numbers::sqrt2
                           : 1.0);
    if (spec.errors == BreakErrorKind::Garch) {
      if (t > 0) h = 0.1 + 0.2 * eps_prev * eps_prev + 0.7 * h;
      out.eps[t] = zeta * std::sqrt(h);
      eps_prev = out.eps[t];
    } else {
      out.eps[t] = zeta;
    }
    const double slope =
        spec.beta1 + (spec.r_star && t + 1 >= t_break ? spec.theta : 0.0);
    out.y[t] = slope * out.x(t, 0) + out.eps[t];
  }
  return out;
}

}  // namespace

SampleDraw simulate(const DgpSpec& spec, int n, rng::Stream& stream) {
  require_n(n);
  return std::visit(
      [&](const auto& s) -> SampleDraw {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IidGaussian>) {
          return simulate_iid_gaussian(s.beta, n, stream);
        } else if constexpr (std::is_same_v<T, CointegrationRW>) {
          return simulate_iid_gaussian(s.beta, n, stream);
        } else if constexpr (std::is_same_v<T, ArchBivariate>) {
          return simulate_arch(s.beta, n, stream);
        } else if constexpr (std::is_same_v<T, EndogenousSign>) {
          return simulate_endogenous_sign(s, n, stream);
        } else if constexpr (std::is_same_v<T, InfiniteVarianceIid>) {
          if (!(s.alpha > 0.0 && s.alpha < 2.0)) {
            throw std::invalid_argument(
                "InfiniteVarianceIid: alpha must lie in (0, 2)");
          }
          SampleDraw out;
          out.eps = rng::sample_symmetric_stable(stream, n, s.alpha);
          out.y = out.eps;
          out.x.resize(n, 0);
          out.eta.resize(0);
          return out;
        } else if constexpr (std::is_same_v<T, PredictiveRegression>) {
          return simulate_predictive(s, n, stream);
        } else {
          return simulate_break(s, n, stream);
        }
      },
      spec);
}

double endogenous_sign_flip_prob(double eta, double delta) {
  const double k = 1.0 + delta;
  const double rate = 0.5 * eta * eta * delta * (2.0 + delta) / (k * k);
  return 1.0 / (1.0 + k * std::exp(-rate));
}

SampleDraw simulate_conditional_iii(const EndogenousSign& spec,
                                    const SampleDraw& base,
                                    rng::Stream& stream) {
  const Eigen::Index n = base.eta.size();
  SampleDraw out;
  out.x = base.x;
  out.eta = base.eta;
  out.eps.resize(n);
  // Given eta_t, |eps_t| is half-normal on each sign branch; only the sign
  // probability depends on eta.
  for (Eigen::Index t = 0; t < n; ++t) {
    const double p_neg = endogenous_sign_flip_prob(base.eta[t], spec.delta);
    const double mag = std::abs(stream.normal());
    out.eps[t] = stream.uniform01() < p_neg ? -mag : mag;
  }
  out.y = spec.beta * out.x.col(0) + out.eps;
  return out;
}

SampleDraw simulate_conditional(const DgpSpec& spec, const SampleDraw& base,
                                rng::Stream& stream) {
  return std::visit(
      [&](const auto& s) -> SampleDraw {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IidGaussian> ||
                      std::is_same_v<T, CointegrationRW>) {
          SampleDraw out;
          out.x = base.x;
          out.eta = base.eta;
          out.eps = rng::sample_std_normal(stream, base.eta.size());
          out.y = s.beta * out.x.col(0) + out.eps;
          return out;
        } else if constexpr (std::is_same_v<T, ArchBivariate>) {
          // eta never feeds back into eps, so conditionally on the eta path
          // the eps recursion just runs with fresh Gaussian scale factors.
          const Eigen::Index n = base.eta.size();
          SampleDraw out;
          out.x = base.x;
          out.eta = base.eta;
          out.eps.resize(n);
          double eps_prev_sq = kArchInitVar;
          double eta_prev_sq = kArchInitVar;
          for (Eigen::Index t = 0; t < n; ++t) {
            out.eps[t] = stream.normal() *
                         std::sqrt(1.0 + 0.3 * eps_prev_sq + 0.3 * eta_prev_sq);
            eps_prev_sq = out.eps[t] * out.eps[t];
            eta_prev_sq = base.eta[t] * base.eta[t];
          }
          out.y = s.beta * out.x.col(0) + out.eps;
          return out;
        } else if constexpr (std::is_same_v<T, EndogenousSign>) {
          return simulate_conditional_iii(s, base, stream);
        } else {
          throw std::invalid_argument(
              "simulate_conditional: no conditional sampler for this design");
        }
      },
      spec);
}

bool has_conditional_sampler(const DgpSpec& spec) {
  return std::holds_alternative<IidGaussian>(spec) ||
         std::holds_alternative<CointegrationRW>(spec) ||
         std::holds_alternative<ArchBivariate>(spec) ||
         std::holds_alternative<EndogenousSign>(spec);
}

std::optional<double> slope_of(const DgpSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::optional<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IidGaussian> ||
                      std::is_same_v<T, CointegrationRW> ||
                      std::is_same_v<T, ArchBivariate> ||
                      std::is_same_v<T, EndogenousSign>) {
          return s.beta;
        } else {
          return std::nullopt;
        }
      },
      spec);
}

DgpSpec with_slope(const DgpSpec& spec, double beta) {
  DgpSpec out = spec;
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IidGaussian> ||
                      std::is_same_v<T, CointegrationRW> ||
                      std::is_same_v<T, ArchBivariate> ||
                      std::is_same_v<T, EndogenousSign>) {
          s.beta = beta;
        } else {
          throw std::invalid_argument("with_slope: design has no slope");
        }
      },
      out);
  return out;
}

}  // namespace randboot::dgp
