#include "randboot/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "randboot/gaussian.hpp"

namespace randboot::diag {
namespace {

// Sample quantile with linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const auto k = sorted.size();
  const double h = p * static_cast<double>(k - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= k) return sorted.back();
  return sorted[lo] + (h - std::floor(h)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

Eigen::VectorXd uniform_grid(int size) {
  if (size < 2) throw std::invalid_argument("uniform_grid: need size >= 2");
  Eigen::VectorXd grid(size);
  for (int i = 0; i < size; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(size - 1);
  }
  return grid;
}

Eigen::VectorXd ecdf(const std::vector<double>& values,
                     const Eigen::VectorXd& grid) {
  if (values.empty()) throw std::invalid_argument("ecdf: empty sample");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  Eigen::VectorXd out(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto count =
        std::upper_bound(sorted.begin(), sorted.end(), grid[i]) -
        sorted.begin();
    out[i] = static_cast<double>(count) / static_cast<double>(sorted.size());
  }
  return out;
}

double ks_to_uniform(std::vector<double> pvalues) {
  if (pvalues.empty()) throw std::invalid_argument("ks_to_uniform: empty sample");
  std::sort(pvalues.begin(), pvalues.end());
  const auto k = static_cast<double>(pvalues.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < pvalues.size(); ++i) {
    const double p = pvalues[i];
    sup = std::max(sup, std::max((static_cast<double>(i) + 1.0) / k - p,
                                 p - static_cast<double>(i) / k));
  }
  return sup;
}

UniformityReport uniformity_report(const std::vector<double>& pvalues,
                                   const std::vector<double>& levels) {
  UniformityReport report;
  report.count = static_cast<int>(pvalues.size());
  report.ks = ks_to_uniform(pvalues);
  for (double q : levels) report.rejection_rates[q] = rejection_rate(pvalues, q);
  return report;
}

double rejection_rate(const std::vector<double>& pvalues, double q) {
  if (pvalues.empty()) throw std::invalid_argument("rejection_rate: empty sample");
  const auto count = std::count_if(pvalues.begin(), pvalues.end(),
                                   [q](double p) { return p <= q; });
  return static_cast<double>(count) / static_cast<double>(pvalues.size());
}

FanChartSummary fanchart(const Eigen::VectorXd& grid,
                         const Eigen::MatrixXd& rows, double band_lo,
                         double band_hi) {
  if (rows.rows() < 1 || rows.cols() != grid.size()) {
    throw std::invalid_argument("fanchart: panel shape mismatch");
  }
  if (!(band_lo >= 0.0 && band_lo < band_hi && band_hi <= 1.0)) {
    throw std::invalid_argument("fanchart: need 0 <= band_lo < band_hi <= 1");
  }
  FanChartSummary out;
  out.grid = grid;
  out.band_lo = band_lo;
  out.band_hi = band_hi;
  out.average = rows.colwise().mean();
  out.lower.resize(grid.size());
  out.upper.resize(grid.size());
  std::vector<double> column(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      column[static_cast<std::size_t>(i)] = rows(i, j);
    }
    std::sort(column.begin(), column.end());
    out.lower[j] = quantile_sorted(column, band_lo);
    out.upper[j] = quantile_sorted(column, band_hi);
  }
  out.max_dispersion = (out.upper - out.lower).maxCoeff();
  return out;
}

double local_power_oracle(double b, double q, int paths, int steps,
                          rng::Stream& stream) {
  if (paths < 1 || steps < 1) {
    throw std::invalid_argument("local_power_oracle: need paths >= 1, steps >= 1");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("local_power_oracle: q must lie in (0, 1)");
  }
  const double zq = gauss::quantile(q);
  const double inv_steps_sq =
      1.0 / (static_cast<double>(steps) * static_cast<double>(steps));
  double acc = 0.0;
  for (int p = 0; p < paths; ++p) {
    double walk = 0.0;
    double sumsq = 0.0;
    for (int s = 0; s < steps; ++s) {
      walk += stream.normal();
      sumsq += walk * walk;
    }
    const double m = sumsq * inv_steps_sq;
    acc += gauss::cdf(zq - std::sqrt(m) * b);
  }
  return acc / static_cast<double>(paths);
}

}  // namespace randboot::diag
