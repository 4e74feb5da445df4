#pragma once

#include <optional>
#include <variant>

#include <Eigen/Core>

#include "randboot/rng.hpp"

namespace randboot::dgp {

// Cointegration-type design: (eps_t, eta_t) i.i.d. N(0, I2),
// x_t = sum_{s<=t} eta_s, y_t = beta * x_t + eps_t.
struct IidGaussian {
  double beta = 0.0;
};

// Same regression as IidGaussian but with bivariate ARCH innovations:
//   eps_t = zeta_t * (1 + 0.3 eps_{t-1}^2 + 0.3 eta_{t-1}^2)^{1/2}
//   eta_t = xi_t * (1 + 0.6 eta_{t-1}^2)^{1/2}
// with (zeta_t, xi_t) i.i.d. N(0, I2) and the recursions initialized at the
// unconditional second moments (both equal to 2.5).
struct ArchBivariate {
  double beta = 0.0;
};

// Cointegration design with endogenous volatility sign-feedback:
//   eps_t i.i.d. N(0, 1),  eta_t = xi_t * (1 + delta * 1{eps_t <= 0}).
struct EndogenousSign {
  double delta = 9.0;
  double beta = 0.0;
};

// Alias of IidGaussian used when the slope itself is the object of interest
// (local alternatives beta = b / n).
struct CointegrationRW {
  double beta = 0.0;
};

// y_t = eps_t with eps_t i.i.d. symmetric alpha-stable, alpha in (0, 2):
// infinite variance, no regressors.
struct InfiniteVarianceIid {
  double alpha = 1.2;
};

// Predictive regression y_t = theta1 + theta2 * x_{t-1} + eps_t with
// x_t = (1 - c/n) x_{t-1} + u_t, x_0 = 0, (u_t, eps_t) i.i.d. N(0, I2).
// c = 0 gives a pure random walk regressor.
struct PredictiveRegression {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double c = 0.0;
};

enum class BreakRegressorKind { IidStationary, VarianceShift };
enum class BreakErrorKind { Homoskedastic, Garch };

// Slope-break regression y_t = (beta1 + theta * 1{t >= floor(r_star n)}) x_t
// + eps_t. Absent r_star means no break (theta ignored). Regressors are
// i.i.d. N(0, 1), with VarianceShift doubling their variance on the second
// half of the sample. Garch errors follow a GARCH(1,1) with parameters
// (0.1, 0.2, 0.7), unit unconditional variance.
struct BreakRegression {
  double beta1 = 1.0;
  double theta = 0.0;
  std::optional<double> r_star;
  BreakRegressorKind regressor = BreakRegressorKind::IidStationary;
  BreakErrorKind errors = BreakErrorKind::Homoskedastic;
};

using DgpSpec = std::variant<IidGaussian, ArchBivariate, EndogenousSign,
                             CointegrationRW, InfiniteVarianceIid,
                             PredictiveRegression, BreakRegression>;

// One simulated sample. Column layout of x by variant:
//   cointegration designs  n x 1: x_t = sum_{s<=t} eta_s
//   InfiniteVarianceIid    n x 0
//   PredictiveRegression   n x 2: [x_{t-1}, x_t - x_{t-1}]
//   BreakRegression        n x 1: the regressor
// eta holds the innovations driving x (empty when x is empty).
struct SampleDraw {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;
  Eigen::VectorXd eps;
  Eigen::VectorXd eta;
};

SampleDraw simulate(const DgpSpec& spec, int n, rng::Stream& stream);

// Probability that eps_t <= 0 given eta_t under the EndogenousSign design;
// derived from Bayes' rule on the two sign branches.
double endogenous_sign_flip_prob(double eta, double delta);

// Redraw eps (and hence y) from its exact conditional law given the regressor
// history of `base`, holding x and eta fixed.
SampleDraw simulate_conditional_iii(const EndogenousSign& spec,
                                    const SampleDraw& base,
                                    rng::Stream& stream);

// Conditional redraw dispatcher; defined for the cointegration-type designs
// (IidGaussian, CointegrationRW, ArchBivariate, EndogenousSign). Other
// variants have no conditional sampler and throw std::invalid_argument.
SampleDraw simulate_conditional(const DgpSpec& spec, const SampleDraw& base,
                                rng::Stream& stream);

bool has_conditional_sampler(const DgpSpec& spec);

// Slope coefficient of the y-equation, if the variant has one.
std::optional<double> slope_of(const DgpSpec& spec);

// Copy of `spec` with the y-equation slope replaced; throws for variants
// without a slope.
DgpSpec with_slope(const DgpSpec& spec, double beta);

}  // namespace randboot::dgp
