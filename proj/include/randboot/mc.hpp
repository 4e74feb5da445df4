#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "randboot/bootstrap.hpp"
#include "randboot/dgp.hpp"
#include "randboot/rng.hpp"

namespace randboot::mc {

enum class Statistic { Slope, Cusum, CusumResiduals, Ks, Boundary, SupF };

// One test procedure: a data design, a bootstrap scheme, and the statistic
// the scheme resamples. beta0 is the null value of the tested coefficient
// (the slope for Slope, the constrained coordinate for Boundary). When
// local_alt_b is set, data are simulated under slope b / n while the test
// keeps the null at beta0.
struct Experiment {
  dgp::DgpSpec dgp;
  boot::SchemeSpec scheme;
  Statistic statistic = Statistic::Slope;
  boot::Tail tail = boot::Tail::Left;
  int n = 100;
  double beta0 = 0.0;
  std::optional<double> local_alt_b;
};

Statistic default_statistic(const boot::SchemeSpec& scheme);
boot::Tail default_tail(Statistic statistic);

// Throws std::invalid_argument naming the first incompatibility between the
// design, the scheme, and the statistic.
void validate(const Experiment& exp);

// Computes the observed statistic on `sample`, runs the scheme with
// replicate streams drawn from `replicate_streams`.child(b), and returns the
// bootstrap p-value for the configured tail.
double evaluate_pvalue(const Experiment& exp, const dgp::SampleDraw& sample,
                       const rng::StreamFactory& replicate_streams);

// reps independent samples; sample r uses stream path [r, 0] and bootstrap
// replicate b the path [r, 1, b], r = 1..reps. Outer reps run in parallel;
// output slot r-1 is a pure function of (seed, r), so results are identical
// for every thread count. threads <= 0 resolves via par::resolve_threads.
std::vector<double> run_unconditional(const Experiment& exp, int reps,
                                      std::uint64_t master_seed,
                                      int threads = 0);

// Row m: the p-value cdf on `grid` conditional on the regressor path of
// outer draw m.
struct ConditionalEcdfPanel {
  Eigen::VectorXd grid;
  Eigen::MatrixXd rows;  // outer_paths x grid.size()
};

// Two-layer design: outer path m draws the regressor history (stream
// [m, 0]); inner rep v redraws errors conditionally (stream [m, v]) and
// bootstraps with paths [m, v, b]. Requires a conditional sampler for the
// design. Outer paths run in parallel with the same determinism guarantee
// as run_unconditional.
ConditionalEcdfPanel run_double(const Experiment& exp, int outer_paths,
                                int inner_reps, int grid_size,
                                std::uint64_t master_seed, int threads = 0);

}  // namespace randboot::mc
