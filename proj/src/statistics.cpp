#include "randboot/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace randboot::stats {

StatValue slope_stat(const est::OlsFit& fit, double beta0, double alpha_exp,
                     int n) {
  if (fit.coef.size() != 1) {
    throw std::invalid_argument("slope_stat: fit must be univariate");
  }
  return {std::pow(static_cast<double>(n), 0.5 * alpha_exp) *
          (fit.coef[0] - beta0)};
}

StatValue cusum_stat(const Eigen::VectorXd& e, NuChoice nu) {
  const Eigen::Index n = e.size();
  if (n < 2) throw std::invalid_argument("cusum_stat: need n >= 2");
  const double mean = e.mean();
  double norm = 1.0;
  switch (nu) {
    case NuChoice::SqrtSumSquares:
      norm = std::sqrt((e.array() - mean).square().sum());
      break;
    case NuChoice::MaxAbs:
      norm = e.cwiseAbs().maxCoeff();
      break;
    case NuChoice::One:
      norm = 1.0;
      break;
  }
  if (norm == 0.0) {
    throw std::invalid_argument("cusum_stat: degenerate normalization");
  }
  double partial = 0.0;
  double max_abs = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    partial += e[t] - mean;
    max_abs = std::max(max_abs, std::abs(partial));
  }
  return {max_abs / norm};
}

StatValue ks_stat(const Eigen::VectorXd& residuals,
                  const std::function<double(double)>& f0_cdf) {
  const Eigen::Index n = residuals.size();
  if (n < 1) throw std::invalid_argument("ks_stat: need n >= 1");
  std::vector<double> sorted(residuals.begin(), residuals.end());
  std::sort(sorted.begin(), sorted.end());
  double sup = 0.0;
  double at = sorted.front();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double f = f0_cdf(sorted[static_cast<std::size_t>(i)]);
    const double dn = static_cast<double>(n);
    const double d =
        std::max((static_cast<double>(i) + 1.0) / dn - f,
                 f - static_cast<double>(i) / dn);
    if (d > sup) {
      sup = d;
      at = sorted[static_cast<std::size_t>(i)];
    }
  }
  StatValue out{std::sqrt(static_cast<double>(n)) * sup};
  out.aux = at;
  return out;
}

StatValue boundary_stat(const Eigen::VectorXd& theta_hat,
                        const est::AffineConstraint& con, int n) {
  if (con.a.size() != theta_hat.size()) {
    throw std::invalid_argument("boundary_stat: constraint dimension mismatch");
  }
  return {std::sqrt(static_cast<double>(n)) * con.value(theta_hat)};
}

SupFScan::SupFScan(Eigen::MatrixXd x, double r_lo, double r_hi)
    : x_(std::move(x)) {
  const auto n = static_cast<int>(x_.rows());
  const auto m = static_cast<int>(x_.cols());
  if (!(r_lo > 0.0 && r_lo < r_hi && r_hi < 1.0)) {
    throw std::invalid_argument("SupFScan: need 0 < r_lo < r_hi < 1");
  }
  t_lo_ = static_cast<int>(std::floor(r_lo * n));
  t_hi_ = static_cast<int>(std::floor(r_hi * n));
  if (t_lo_ - 1 < m || n - t_hi_ + 1 < m || n <= 2 * m) {
    throw std::invalid_argument("SupFScan: grid leaves a segment shorter than m");
  }

  Eigen::MatrixXd gram = x_.transpose() * x_;
  gram_llt_.compute(gram);
  if (gram_llt_.info() != Eigen::Success) {
    throw std::invalid_argument("SupFScan: design is rank deficient");
  }

  // A(t) accumulated from the sample end; the Schur complement
  // S(t) = A(t) - A(t) G^{-1} A(t) is the gram of the post-break block
  // after projecting out the full design.
  suffix_grams_.resize(static_cast<std::size_t>(t_hi_ - t_lo_ + 1));
  schur_llt_.resize(suffix_grams_.size());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
  for (int t = n; t >= t_lo_; --t) {
    acc.noalias() += x_.row(t - 1).transpose() * x_.row(t - 1);
    if (t <= t_hi_) {
      const auto idx = static_cast<std::size_t>(t - t_lo_);
      suffix_grams_[idx] = acc;
      schur_llt_[idx].compute(acc - acc * gram_llt_.solve(acc));
      if (schur_llt_[idx].info() != Eigen::Success) {
        throw std::invalid_argument("SupFScan: degenerate split at a grid point");
      }
    }
  }
}

const Eigen::MatrixXd& SupFScan::suffix_gram(int t) const {
  if (t < t_lo_ || t > t_hi_) {
    throw std::invalid_argument("SupFScan::suffix_gram: t outside grid");
  }
  return suffix_grams_[static_cast<std::size_t>(t - t_lo_)];
}

StatValue SupFScan::eval(const Eigen::VectorXd& y, int* t_argmax) const {
  const auto n = static_cast<int>(x_.rows());
  const auto m = static_cast<int>(x_.cols());
  if (y.size() != n) throw std::invalid_argument("SupFScan::eval: y length mismatch");

  const Eigen::VectorXd coef_r = gram_llt_.solve(x_.transpose() * y);
  const Eigen::VectorXd resid = y - x_ * coef_r;
  const double ssr_r = resid.squaredNorm();

  // v(t) = sum_{s>=t} x_s resid_s; ssr_r - ssr_u(t) = v(t)' S(t)^{-1} v(t).
  std::vector<Eigen::VectorXd> v(suffix_grams_.size());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
  for (int t = n; t >= t_lo_; --t) {
    acc.noalias() += x_.row(t - 1).transpose() * resid[t - 1];
    if (t <= t_hi_) v[static_cast<std::size_t>(t - t_lo_)] = acc;
  }

  double best_f = -1.0;
  int best_t = t_lo_;
  for (int t = t_lo_; t <= t_hi_; ++t) {
    const auto idx = static_cast<std::size_t>(t - t_lo_);
    const double gain = v[idx].dot(schur_llt_[idx].solve(v[idx]));
    const double ssr_u = ssr_r - gain;
    if (ssr_u <= 1e-12 * y.squaredNorm()) {
      throw std::runtime_error("sup_f: zero unrestricted SSR, F statistic undefined");
    }
    const double f = gain / (ssr_u / static_cast<double>(n - 2 * m));
    if (f > best_f) {
      best_f = f;
      best_t = t;
    }
  }
  if (t_argmax != nullptr) *t_argmax = best_t;
  StatValue out{best_f};
  out.aux = static_cast<double>(best_t) / static_cast<double>(n);
  return out;
}

StatValue sup_f(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                double r_lo, double r_hi) {
  return SupFScan(x, r_lo, r_hi).eval(y);
}

}  // namespace randboot::stats
