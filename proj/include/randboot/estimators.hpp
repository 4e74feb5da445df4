#pragma once

#include <Eigen/Dense>

namespace randboot::est {

struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd residuals;
  double ssr = 0.0;
  Eigen::MatrixXd gram;     // X'X
  double sigma2_hat = 0.0;  // ssr / n
};

// Half-space restriction a'theta + b >= c. The map g(theta) = a'theta + b is
// the object under test; c is the bound, which bootstrap schemes move.
struct AffineConstraint {
  Eigen::VectorXd a;
  double b = 0.0;
  double c = 0.0;

  [[nodiscard]] double value(const Eigen::VectorXd& theta) const {
    return a.dot(theta) + b;
  }
};

// Factorizations of a fixed design, reused across many right-hand sides.
// Construction throws std::invalid_argument if X is rank deficient (column
// pivoted QR, relative threshold 1e-10).
class LeastSquares {
 public:
  explicit LeastSquares(Eigen::MatrixXd x);

  [[nodiscard]] OlsFit solve(const Eigen::VectorXd& y) const;

  // Minimizes the sum of squares subject to a'theta + b >= c. When the
  // unconstrained solution is infeasible the minimizer lies on the boundary
  // and equals the projection of the OLS estimate onto {a'theta + b = c} in
  // the X'X metric:
  //   theta = theta_ols + (X'X)^{-1} a (a'(X'X)^{-1}a)^{-1} (c - b - a'theta_ols)
  [[nodiscard]] OlsFit solve_constrained(const Eigen::VectorXd& y,
                                         const AffineConstraint& con) const;

  [[nodiscard]] const Eigen::MatrixXd& gram() const { return gram_; }
  [[nodiscard]] const Eigen::MatrixXd& design() const { return x_; }
  [[nodiscard]] Eigen::Index n() const { return x_.rows(); }
  [[nodiscard]] Eigen::Index m() const { return x_.cols(); }

 private:
  Eigen::MatrixXd x_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  Eigen::MatrixXd gram_;
  Eigen::LLT<Eigen::MatrixXd> gram_llt_;
};

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& x);

OlsFit constrained_ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                       const AffineConstraint& con);

// Restricted (no break) and unrestricted (slope shift from observation
// floor(r*n) on, 1-based) fits, plus the F statistic
//   F = (ssr_restricted - ssr_unrestricted) / (ssr_unrestricted / (n - 2m)).
struct BreakFit {
  OlsFit restricted;
  OlsFit unrestricted;
  double f_stat = 0.0;
  int t_break = 0;
};

BreakFit break_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                   double r);

// [X, X .* 1{t >= t_break}] with t 1-based; the unrestricted break design.
Eigen::MatrixXd break_design(const Eigen::MatrixXd& x, int t_break);

}  // namespace randboot::est
