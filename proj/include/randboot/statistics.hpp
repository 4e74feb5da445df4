#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "randboot/estimators.hpp"

namespace randboot::stats {

struct StatValue {
  double value = 0.0;
  // Statistic-specific location info: argmax break fraction for sup_f, the
  // residual at which the KS supremum is attained.
  std::optional<double> aux;
};

// Normalization nu_n for the CUSUM statistic.
enum class NuChoice { SqrtSumSquares, MaxAbs, One };

// n^{alpha_exp / 2} * (beta_hat - beta0) for a univariate fit.
StatValue slope_stat(const est::OlsFit& fit, double beta0, double alpha_exp,
                     int n);

// nu^{-1} * max_t | sum_{i<=t} (e_i - mean(e)) |. SqrtSumSquares uses the
// demeaned sum of squares; MaxAbs uses max |e_i| of the raw series. A zero
// normalization is degenerate and throws.
StatValue cusum_stat(const Eigen::VectorXd& e, NuChoice nu);

// n^{1/2} * sup_x |F_hat(x) - F0(x)| computed exactly at the order
// statistics. aux = residual value at which the supremum is attained.
StatValue ks_stat(const Eigen::VectorXd& residuals,
                  const std::function<double(double)>& f0_cdf);

// n^{1/2} * (a'theta_hat + b).
StatValue boundary_stat(const Eigen::VectorXd& theta_hat,
                        const est::AffineConstraint& con, int n);

// Workspace for the sup-F scan over break points t in
// {floor(r_lo n), ..., floor(r_hi n)} (1-based). All X-dependent pieces
// (full gram, suffix grams, Schur complements) are factored once so that
// repeated evaluations on new responses cost O(n m + grid m^2).
class SupFScan {
 public:
  SupFScan(Eigen::MatrixXd x, double r_lo, double r_hi);

  // F(t) = (ssr_restricted - ssr_unrestricted(t)) / (ssr_unrestricted(t) / (n - 2m))
  // maximized over the grid; ties resolved to the smallest break point.
  // t_argmax, when non-null, receives the 1-based maximizing break point.
  [[nodiscard]] StatValue eval(const Eigen::VectorXd& y,
                               int* t_argmax = nullptr) const;

  [[nodiscard]] int grid_begin() const { return t_lo_; }
  [[nodiscard]] int grid_end() const { return t_hi_; }
  [[nodiscard]] const Eigen::MatrixXd& suffix_gram(int t) const;

 private:
  Eigen::MatrixXd x_;
  int t_lo_ = 0;
  int t_hi_ = 0;
  Eigen::LLT<Eigen::MatrixXd> gram_llt_;
  std::vector<Eigen::MatrixXd> suffix_grams_;          // A(t) = sum_{s>=t} x x'
  std::vector<Eigen::LLT<Eigen::MatrixXd>> schur_llt_; // A - A G^{-1} A
};

StatValue sup_f(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                double r_lo, double r_hi);

}  // namespace randboot::stats
