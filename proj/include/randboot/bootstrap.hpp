#pragma once

#include <optional>
#include <variant>

#include <Eigen/Core>

#include "randboot/dgp.hpp"
#include "randboot/estimators.hpp"
#include "randboot/rng.hpp"
#include "randboot/statistics.hpp"

namespace randboot::boot {

enum class Tail { Left, Right };

// Monte Carlo approximation of the bootstrap law: sorted replicate draws.
struct EmpiricalDist {
  Eigen::VectorXd draws;  // ascending
};

// Closed-form bootstrap law N(0, scale^2), available when the replicate
// statistic is exactly Gaussian conditional on the data.
struct AnalyticNormalCdf {
  double scale = 1.0;
};

using BootstrapDistribution = std::variant<EmpiricalDist, AnalyticNormalCdf>;

// Left:  P*(tau* <= tau);  Right:  P*(tau* >= tau). Empirical proportions
// count ties on both sides, so Left + Right = 1 + #{tau* == tau} / B.
double pvalue(const BootstrapDistribution& dist, double tau, Tail tail);

// y* = beta_hat x + omega_hat^{1/2} eps*, eps* i.i.d. N(0,1), replicate
// statistic n^{alpha_exp/2} (beta*_hat - beta_hat). Conditional on the data
// this is exactly N(0, n^{alpha_exp} omega_hat / M_n), which `analytic`
// returns in closed form. omega_hat is fit.sigma2_hat unless a known error
// variance is supplied.
struct FixedDesignGaussianSpec {
  bool analytic = true;
  int b = 999;
  double alpha_exp = 2.0;
  std::optional<double> known_omega;
};

BootstrapDistribution fixed_design_gaussian(const est::OlsFit& fit,
                                            const Eigen::VectorXd& x,
                                            const FixedDesignGaussianSpec& spec,
                                            const rng::StreamFactory& streams);

// Permutation distribution of the CUSUM statistic. FullEnumeration visits all
// n! rearrangements (Auto selects it when n <= 8); MonteCarlo draws b uniform
// permutations from child streams 1..b.
struct PermutationCusumSpec {
  enum class Mode { Auto, MonteCarlo, FullEnumeration };
  Mode mode = Mode::Auto;
  int b = 999;
  stats::NuChoice nu = stats::NuChoice::SqrtSumSquares;
};

BootstrapDistribution permutation_cusum(const Eigen::VectorXd& e,
                                        const PermutationCusumSpec& spec,
                                        const rng::StreamFactory& streams);

// Parametric bootstrap of the Kolmogorov-Smirnov distance to a standard
// normal error law: draw eps* i.i.d. N(0,1), re-estimate the regression on
// the fixed design, and take the KS statistic of the bootstrap residuals.
// An empty design (zero columns) skips the estimation step.
struct ParametricKsSpec {
  int b = 999;
};

BootstrapDistribution parametric_ks(const Eigen::MatrixXd& x,
                                    const ParametricKsSpec& spec,
                                    const rng::StreamFactory& streams);

// Fixed-design wild bootstrap for a one-sided constraint g(theta) >= 0 on a
// boundary-constrained regression. Replicates are
//   y* = theta_hat_1 + theta_hat_2 x_{t-1} + e_hat_t w*_t,  w* i.i.d. N(0,1),
// refit under the bound g >= bound(kind), and yield
//   n^{1/2} (g(theta*) - g(theta_hat)).
// Bound by kind: Standard 0, Restricted g(theta_hat),
// Shrinking g(theta_hat) - |g(theta_hat)|^{1 + kappa}.
enum class BoundaryKind { Standard, Restricted, Shrinking };

struct BoundaryWildSpec {
  BoundaryKind kind = BoundaryKind::Standard;
  double kappa = 0.5;
  int b = 999;
};

// `sample` must have the predictive layout (x columns [x_{t-1}, dx_t]);
// `constrained_fit` is the constrained fit of y on [1, x_{t-1}, dx_t] under
// `con`, whose last coefficient the bootstrap regression drops (con.a must
// place no weight on it).
BootstrapDistribution boundary_wild(const dgp::SampleDraw& sample,
                                    const est::OlsFit& constrained_fit,
                                    const est::AffineConstraint& con,
                                    const BoundaryWildSpec& spec,
                                    const rng::StreamFactory& streams);

// Fixed-regressor wild bootstrap of the sup-F break statistic: residuals are
// taken from the unrestricted fit at the original argmax break, replicates
// are y* = e_tilde .* w*, and each replicate rescans the full grid.
struct SupFWildSpec {
  int b = 999;
  double r_lo = 0.15;
  double r_hi = 0.85;
};

BootstrapDistribution supf_wild(const Eigen::VectorXd& y,
                                const Eigen::MatrixXd& x,
                                const SupFWildSpec& spec,
                                const rng::StreamFactory& streams);

using SchemeSpec =
    std::variant<FixedDesignGaussianSpec, PermutationCusumSpec,
                 ParametricKsSpec, BoundaryWildSpec, SupFWildSpec>;

}  // namespace randboot::boot
