#include "randboot/mc.hpp"

#include <stdexcept>
#include <string>

#include "randboot/diagnostics.hpp"
#include "randboot/estimators.hpp"
#include "randboot/gaussian.hpp"
#include "randboot/parallel.hpp"
#include "randboot/statistics.hpp"

namespace randboot::mc {
namespace {

bool is_cointegration_type(const dgp::DgpSpec& spec) {
  return dgp::has_conditional_sampler(spec);
}

dgp::DgpSpec effective_dgp(const Experiment& exp) {
  if (!exp.local_alt_b) return exp.dgp;
  return dgp::with_slope(exp.dgp, *exp.local_alt_b / static_cast<double>(exp.n));
}

est::AffineConstraint boundary_constraint(double null_value) {
  est::AffineConstraint con;
  con.a = Eigen::Vector3d{0.0, 1.0, 0.0};
  con.b = -null_value;
  con.c = 0.0;
  return con;
}

double evaluate_slope(const Experiment& exp,
                      const boot::FixedDesignGaussianSpec& spec,
                      const dgp::SampleDraw& sample,
                      const rng::StreamFactory& streams) {
  const est::OlsFit fit = est::ols(sample.y, sample.x);
  const stats::StatValue tau =
      stats::slope_stat(fit, exp.beta0, spec.alpha_exp, exp.n);
  const boot::BootstrapDistribution dist =
      boot::fixed_design_gaussian(fit, sample.x.col(0), spec, streams);
  return boot::pvalue(dist, tau.value, exp.tail);
}

double evaluate_cusum(const Experiment& exp,
                      const boot::PermutationCusumSpec& spec,
                      const dgp::SampleDraw& sample,
                      const rng::StreamFactory& streams) {
  const Eigen::VectorXd input =
      exp.statistic == Statistic::CusumResiduals
          ? est::ols(sample.y, sample.x).residuals
          : sample.y;
  const stats::StatValue tau = stats::cusum_stat(input, spec.nu);
  const boot::BootstrapDistribution dist =
      boot::permutation_cusum(input, spec, streams);
  return boot::pvalue(dist, tau.value, exp.tail);
}

double evaluate_ks(const Experiment& exp, const boot::ParametricKsSpec& spec,
                   const dgp::SampleDraw& sample,
                   const rng::StreamFactory& streams) {
  const Eigen::VectorXd resid = sample.x.cols() > 0
                                    ? est::ols(sample.y, sample.x).residuals
                                    : sample.y;
  const stats::StatValue tau = stats::ks_stat(resid, gauss::cdf);
  const boot::BootstrapDistribution dist =
      boot::parametric_ks(sample.x, spec, streams);
  return boot::pvalue(dist, tau.value, exp.tail);
}

double evaluate_boundary(const Experiment& exp,
                         const boot::BoundaryWildSpec& spec,
                         const dgp::SampleDraw& sample,
                         const rng::StreamFactory& streams) {
  const auto n = sample.y.size();
  Eigen::MatrixXd design(n, 3);
  design.col(0).setOnes();
  design.col(1) = sample.x.col(0);
  design.col(2) = sample.x.col(1);
  const est::AffineConstraint con = boundary_constraint(exp.beta0);
  const est::OlsFit fit = est::constrained_ols(sample.y, design, con);
  const stats::StatValue tau = stats::boundary_stat(fit.coef, con, exp.n);
  const boot::BootstrapDistribution dist =
      boot::boundary_wild(sample, fit, con, spec, streams);
  return boot::pvalue(dist, tau.value, exp.tail);
}

double evaluate_supf(const Experiment& exp, const boot::SupFWildSpec& spec,
                     const dgp::SampleDraw& sample,
                     const rng::StreamFactory& streams) {
  const stats::StatValue tau =
      stats::sup_f(sample.y, sample.x, spec.r_lo, spec.r_hi);
  const boot::BootstrapDistribution dist =
      boot::supf_wild(sample.y, sample.x, spec, streams);
  return boot::pvalue(dist, tau.value, exp.tail);
}

}  // namespace

Statistic default_statistic(const boot::SchemeSpec& scheme) {
  if (std::holds_alternative<boot::FixedDesignGaussianSpec>(scheme)) {
    return Statistic::Slope;
  }
  if (std::holds_alternative<boot::PermutationCusumSpec>(scheme)) {
    return Statistic::Cusum;
  }
  if (std::holds_alternative<boot::ParametricKsSpec>(scheme)) {
    return Statistic::Ks;
  }
  if (std::holds_alternative<boot::BoundaryWildSpec>(scheme)) {
    return Statistic::Boundary;
  }
  return Statistic::SupF;
}

boot::Tail default_tail(Statistic statistic) {
  return statistic == Statistic::Slope ? boot::Tail::Left : boot::Tail::Right;
}

void validate(const Experiment& exp) {
  if (exp.n < 2) throw std::invalid_argument("experiment: need n >= 2");

  const bool coint = is_cointegration_type(exp.dgp);
  if (std::holds_alternative<boot::FixedDesignGaussianSpec>(exp.scheme)) {
    if (exp.statistic != Statistic::Slope) {
      throw std::invalid_argument(
          "experiment: fixed_design_gaussian pairs only with the slope statistic");
    }
    if (!coint) {
      throw std::invalid_argument(
          "experiment: fixed_design_gaussian needs a cointegration-type design");
    }
  } else if (std::holds_alternative<boot::PermutationCusumSpec>(exp.scheme)) {
    if (exp.statistic != Statistic::Cusum &&
        exp.statistic != Statistic::CusumResiduals) {
      throw std::invalid_argument(
          "experiment: permutation_cusum pairs only with a cusum statistic");
    }
    if (exp.statistic == Statistic::CusumResiduals &&
        std::holds_alternative<dgp::InfiniteVarianceIid>(exp.dgp)) {
      throw std::invalid_argument(
          "experiment: cusum_residuals needs a design with regressors");
    }
  } else if (std::holds_alternative<boot::ParametricKsSpec>(exp.scheme)) {
    if (exp.statistic != Statistic::Ks) {
      throw std::invalid_argument(
          "experiment: parametric_ks pairs only with the ks statistic");
    }
  } else if (std::holds_alternative<boot::BoundaryWildSpec>(exp.scheme)) {
    if (exp.statistic != Statistic::Boundary) {
      throw std::invalid_argument(
          "experiment: boundary_wild pairs only with the boundary statistic");
    }
    if (!std::holds_alternative<dgp::PredictiveRegression>(exp.dgp)) {
      throw std::invalid_argument(
          "experiment: boundary_wild needs the predictive regression design");
    }
  } else {
    if (exp.statistic != Statistic::SupF) {
      throw std::invalid_argument(
          "experiment: supf_wild pairs only with the sup_f statistic");
    }
    if (!std::holds_alternative<dgp::BreakRegression>(exp.dgp) && !coint) {
      throw std::invalid_argument(
          "experiment: supf_wild needs a single-regressor design");
    }
  }

  if (exp.local_alt_b && !dgp::slope_of(exp.dgp)) {
    throw std::invalid_argument(
        "experiment: local alternatives need a design with a slope");
  }
}

double evaluate_pvalue(const Experiment& exp, const dgp::SampleDraw& sample,
                       const rng::StreamFactory& replicate_streams) {
  return std::visit(
      [&](const auto& scheme) -> double {
        using T = std::decay_t<decltype(scheme)>;
        if constexpr (std::is_same_v<T, boot::FixedDesignGaussianSpec>) {
          return evaluate_slope(exp, scheme, sample, replicate_streams);
        } else if constexpr (std::is_same_v<T, boot::PermutationCusumSpec>) {
          return evaluate_cusum(exp, scheme, sample, replicate_streams);
        } else if constexpr (std::is_same_v<T, boot::ParametricKsSpec>) {
          return evaluate_ks(exp, scheme, sample, replicate_streams);
        } else if constexpr (std::is_same_v<T, boot::BoundaryWildSpec>) {
          return evaluate_boundary(exp, scheme, sample, replicate_streams);
        } else {
          return evaluate_supf(exp, scheme, sample, replicate_streams);
        }
      },
      exp.scheme);
}

std::vector<double> run_unconditional(const Experiment& exp, int reps,
                                      std::uint64_t master_seed, int threads) {
  validate(exp);
  if (reps < 1) throw std::invalid_argument("run_unconditional: need reps >= 1");
  const dgp::DgpSpec design = effective_dgp(exp);
  const rng::StreamFactory root(master_seed);

  std::vector<double> pvalues(static_cast<std::size_t>(reps));
  par::parallel_for(reps, par::resolve_threads(threads), [&](int i) {
    const auto r = static_cast<std::uint64_t>(i) + 1;
    try {
      const rng::StreamFactory rep = root.child(r);
      rng::Stream sample_stream = rep.child_stream(0);
      const dgp::SampleDraw sample = dgp::simulate(design, exp.n, sample_stream);
      pvalues[static_cast<std::size_t>(i)] =
          evaluate_pvalue(exp, sample, rep.child(1));
    } catch (const std::exception& e) {
      throw std::runtime_error("rep " + std::to_string(r) + ": " + e.what());
    }
  });
  return pvalues;
}

ConditionalEcdfPanel run_double(const Experiment& exp, int outer_paths,
                                int inner_reps, int grid_size,
                                std::uint64_t master_seed, int threads) {
  validate(exp);
  if (outer_paths < 1 || inner_reps < 1) {
    throw std::invalid_argument("run_double: need outer_paths >= 1 and inner_reps >= 1");
  }
  if (!dgp::has_conditional_sampler(exp.dgp)) {
    throw std::invalid_argument("run_double: design has no conditional sampler");
  }
  const dgp::DgpSpec design = effective_dgp(exp);
  const rng::StreamFactory root(master_seed);

  ConditionalEcdfPanel panel;
  panel.grid = diag::uniform_grid(grid_size);
  panel.rows.resize(outer_paths, panel.grid.size());

  par::parallel_for(outer_paths, par::resolve_threads(threads), [&](int i) {
    const auto m = static_cast<std::uint64_t>(i) + 1;
    try {
      const rng::StreamFactory outer = root.child(m);
      rng::Stream path_stream = outer.child_stream(0);
      const dgp::SampleDraw base = dgp::simulate(design, exp.n, path_stream);
      std::vector<double> pvalues(static_cast<std::size_t>(inner_reps));
      for (int v = 1; v <= inner_reps; ++v) {
        try {
          rng::Stream cond_stream =
              outer.child_stream(static_cast<std::uint64_t>(v));
          const dgp::SampleDraw draw =
              dgp::simulate_conditional(design, base, cond_stream);
          pvalues[static_cast<std::size_t>(v - 1)] = evaluate_pvalue(
              exp, draw, outer.child(static_cast<std::uint64_t>(v)));
        } catch (const std::exception& e) {
          throw std::runtime_error("inner rep " + std::to_string(v) + ": " +
                                   e.what());
        }
      }
      panel.rows.row(i) = diag::ecdf(pvalues, panel.grid);
    } catch (const std::exception& e) {
      throw std::runtime_error("outer path " + std::to_string(m) + ": " + e.what());
    }
  });
  return panel;
}

}  // namespace randboot::mc
