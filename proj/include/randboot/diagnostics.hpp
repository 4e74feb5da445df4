#pragma once

#include <map>
#include <vector>

#include <Eigen/Core>

#include "randboot/rng.hpp"

namespace randboot::diag {

// size equally spaced points spanning [0, 1] inclusive; size >= 2.
Eigen::VectorXd uniform_grid(int size);

// Fraction of values <= g for each grid point g.
Eigen::VectorXd ecdf(const std::vector<double>& values,
                     const Eigen::VectorXd& grid);

// sup_{x in [0,1]} |F_hat(x) - x|, evaluated exactly at the order statistics.
double ks_to_uniform(std::vector<double> pvalues);

struct UniformityReport {
  int count = 0;
  double ks = 0.0;
  std::map<double, double> rejection_rates;  // level -> fraction <= level
};

UniformityReport uniformity_report(const std::vector<double>& pvalues,
                                   const std::vector<double>& levels = {
                                       0.01, 0.05, 0.10});

double rejection_rate(const std::vector<double>& pvalues, double q);

// Cross-row summary of a panel of conditional p-value cdfs: pointwise mean
// and pointwise quantile band (default central 90%) over the rows, plus the
// largest band width. Row quantiles use linear interpolation between order
// statistics.
struct FanChartSummary {
  Eigen::VectorXd grid;
  Eigen::VectorXd average;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  double band_lo = 0.05;
  double band_hi = 0.95;
  double max_dispersion = 0.0;
};

FanChartSummary fanchart(const Eigen::VectorXd& grid,
                         const Eigen::MatrixXd& rows, double band_lo = 0.05,
                         double band_hi = 0.95);

// Limit rejection probability of the left-tailed level-q slope test under a
// local slope b/n with a random-walk regressor:
//   E[ Phi( Phi^{-1}(q) - sqrt(M) b ) ],  M = integral of a squared standard
// Brownian motion, approximated over `paths` simulated walks on a grid of
// `steps` increments. Monotone nonincreasing in b for a fixed stream.
double local_power_oracle(double b, double q, int paths, int steps,
                          rng::Stream& stream);

}  // namespace randboot::diag
