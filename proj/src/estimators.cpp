#include "randboot/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace randboot::est {

LeastSquares::LeastSquares(Eigen::MatrixXd x) : x_(std::move(x)) {
  if (x_.rows() < x_.cols() || x_.cols() < 1) {
    throw std::invalid_argument("LeastSquares: need n >= m >= 1");
  }
  qr_.compute(x_);
  qr_.setThreshold(1e-10);
  if (qr_.rank() < x_.cols()) {
    throw std::invalid_argument("LeastSquares: design is rank deficient");
  }
  gram_ = x_.transpose() * x_;
  gram_llt_.compute(gram_);
  if (gram_llt_.info() != Eigen::Success) {
    throw std::invalid_argument("LeastSquares: gram matrix is not positive definite");
  }
}

OlsFit LeastSquares::solve(const Eigen::VectorXd& y) const {
  if (y.size() != x_.rows()) {
    throw std::invalid_argument("LeastSquares::solve: y length mismatch");
  }
  OlsFit fit;
  fit.coef = qr_.solve(y);
  fit.residuals = y - x_ * fit.coef;
  fit.ssr = fit.residuals.squaredNorm();
  fit.gram = gram_;
  fit.sigma2_hat = fit.ssr / static_cast<double>(x_.rows());
  return fit;
}

OlsFit LeastSquares::solve_constrained(const Eigen::VectorXd& y,
                                       const AffineConstraint& con) const {
  if (con.a.size() != x_.cols()) {
    throw std::invalid_argument("solve_constrained: constraint dimension mismatch");
  }
  if (con.a.isZero(0.0)) {
    throw std::invalid_argument("solve_constrained: constraint vector is zero");
  }
  OlsFit fit = solve(y);
  const double slack = con.value(fit.coef) - con.c;
  if (slack >= 0.0) return fit;

  const Eigen::VectorXd gram_inv_a = gram_llt_.solve(con.a);
  fit.coef += gram_inv_a * (-slack / con.a.dot(gram_inv_a));
  fit.residuals = y - x_ * fit.coef;
  fit.ssr = fit.residuals.squaredNorm();
  fit.sigma2_hat = fit.ssr / static_cast<double>(x_.rows());
  return fit;
}

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& x) {
  return LeastSquares(x).solve(y);
}

OlsFit constrained_ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                       const AffineConstraint& con) {
  return LeastSquares(x).solve_constrained(y, con);
}

BreakFit break_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                   double r) {
  const auto n = static_cast<int>(x.rows());
  const auto m = static_cast<int>(x.cols());
  const int t_break = static_cast<int>(std::floor(r * n));
  // Both segments need at least m observations for the shifted design to
  // have full column rank: rows 1..t_break-1 and t_break..n (1-based).
  if (t_break - 1 < m || n - t_break + 1 < m) {
    throw std::invalid_argument("break_fit: break fraction leaves a segment shorter than m");
  }
  if (n < 2 * m + 1) {
    throw std::invalid_argument("break_fit: need n > 2m");
  }

  const Eigen::MatrixXd xu = break_design(x, t_break);

  BreakFit out;
  out.t_break = t_break;
  out.restricted = ols(y, x);
  out.unrestricted = ols(y, xu);
  // Relative to ||y||^2 so a numerically perfect fit is caught too.
  if (out.unrestricted.ssr <= 1e-12 * y.squaredNorm()) {
    throw std::runtime_error("break_fit: zero unrestricted SSR, F statistic undefined");
  }
  out.f_stat = (out.restricted.ssr - out.unrestricted.ssr) /
               (out.unrestricted.ssr / static_cast<double>(n - 2 * m));
  return out;
}

Eigen::MatrixXd break_design(const Eigen::MatrixXd& x, int t_break) {
  const auto n = x.rows();
  const auto m = x.cols();
  if (t_break < 1 || t_break > n) {
    throw std::invalid_argument("break_design: t_break outside sample");
  }
  Eigen::MatrixXd xu(n, 2 * m);
  xu.leftCols(m) = x;
  xu.rightCols(m).setZero();
  xu.bottomRightCorner(n - t_break + 1, m) = x.bottomRows(n - t_break + 1);
  return xu;
}

}  // namespace randboot::est
