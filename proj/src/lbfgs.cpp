#include "shellfield/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace shellfield::lbfgs {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double e : v)
    m = std::max(m, std::abs(e));
  return m;
}

// Minimizer of the cubic through (a, fa, da) and (b, fb, db), safeguarded to
// lie inside the bracket.
double cubic_step(double a, double fa, double da, double b, double fb, double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  double step = 0.5 * (a + b);
  if (disc >= 0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom != 0)
      step = b - (b - a) * (db + d2 - d1) / denom;
  }
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(step) || step < lo + margin || step > hi - margin)
    step = 0.5 * (a + b);
  return step;
}

struct LinePoint {
  double alpha, f, slope;
};

class LineSearch {
public:
  LineSearch(const Objective& obj, std::span<const double> x, std::span<const double> dir,
             const Options& opts)
    : obj_(obj), x_(x), dir_(dir), opts_(opts), trial_(x.size()), grad_(x.size()) {}

  // Returns true on success with the accepted point in trial()/grad().
  bool run(double f0, double slope0, double alpha_init) {
    const LinePoint origin{0.0, f0, slope0};
    LinePoint prev = origin;
    double alpha = alpha_init;
    for (int i = 0; i < opts_.max_line_search; ++i) {
      const LinePoint cur = eval(alpha);
      if (!std::isfinite(cur.f) || cur.f > f0 + opts_.c1 * alpha * slope0 ||
          (i > 0 && cur.f >= prev.f))
        return zoom(origin, prev, cur);
      if (std::abs(cur.slope) <= -opts_.c2 * slope0)
        return true;
      if (cur.slope >= 0)
        return zoom(origin, cur, prev);
      prev = cur;
      alpha *= 2.0;
    }
    return false;
  }

  const std::vector<double>& trial() const { return trial_; }
  const std::vector<double>& grad() const { return grad_; }
  double f() const { return f_; }

private:
  LinePoint eval(double alpha) {
    for (std::size_t k = 0; k < trial_.size(); ++k)
      trial_[k] = x_[k] + alpha * dir_[k];
    f_ = obj_(trial_, grad_);
    return {alpha, f_, dot(grad_, dir_)};
  }

  bool zoom(const LinePoint& origin, LinePoint lo, LinePoint hi) {
    for (int i = 0; i < opts_.max_line_search; ++i) {
      if (!std::isfinite(hi.f))
        hi.f = lo.f + std::abs(lo.f) + 1.0, hi.slope = std::abs(lo.slope) + 1.0;
      const double alpha = cubic_step(lo.alpha, lo.f, lo.slope, hi.alpha, hi.f, hi.slope);
      if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, std::abs(lo.alpha)))
        break;
      const LinePoint cur = eval(alpha);
      if (!std::isfinite(cur.f) || cur.f > origin.f + opts_.c1 * alpha * origin.slope ||
          cur.f >= lo.f) {
        hi = cur;
      } else {
        if (std::abs(cur.slope) <= -opts_.c2 * origin.slope)
          return true;
        if (cur.slope * (hi.alpha - lo.alpha) >= 0)
          hi = lo;
        lo = cur;
      }
    }
    // accept the best sufficient-decrease point found, if any
    if (lo.alpha > 0 && lo.f < origin.f) {
      eval(lo.alpha);
      return true;
    }
    return false;
  }

  const Objective& obj_;
  std::span<const double> x_;
  std::span<const double> dir_;
  const Options& opts_;
  std::vector<double> trial_;
  std::vector<double> grad_;
  double f_ = 0.0;
};

}  // namespace

Result minimize(const Objective& objective, std::vector<double> x0, const Options& opts) {
  const std::size_t n = x0.size();
  Result result;
  std::vector<double> x = std::move(x0);
  std::vector<double> g(n);
  double f = objective(x, g);
  result.history.push_back(f);
  result.x = x;
  result.f = f;
  result.gradient_norm = inf_norm(g);

  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> dir(n), alpha_buf;
  int no_improvement = 0;
  bool reset_memory = false;

  for (int iter = 0;; ++iter) {
    result.iterations = iter;
    if (result.gradient_norm <= opts.gradient_tol) {
      result.status = Status::gradient_converged;
      return result;
    }
    if (iter >= opts.max_iterations) {
      result.status = Status::max_iterations;
      return result;
    }

    // two-loop recursion: dir = -H g
    for (std::size_t k = 0; k < n; ++k)
      dir[k] = -g[k];
    const std::size_t m = s_hist.size();
    alpha_buf.assign(m, 0.0);
    for (std::size_t j = m; j-- > 0;) {
      alpha_buf[j] = rho_hist[j] * dot(s_hist[j], dir);
      for (std::size_t k = 0; k < n; ++k)
        dir[k] -= alpha_buf[j] * y_hist[j][k];
    }
    if (m > 0) {
      const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& d : dir)
        d *= gamma;
    }
    for (std::size_t j = 0; j < m; ++j) {
      const double beta = rho_hist[j] * dot(y_hist[j], dir);
      for (std::size_t k = 0; k < n; ++k)
        dir[k] += (alpha_buf[j] - beta) * s_hist[j][k];
    }
    double slope = dot(g, dir);
    if (!(slope < 0)) {
      for (std::size_t k = 0; k < n; ++k)
        dir[k] = -g[k];
      slope = dot(g, dir);
      s_hist.clear(), y_hist.clear(), rho_hist.clear();
    }
    const double alpha0 = s_hist.empty() ? std::min(1.0, 1.0 / std::sqrt(-slope)) : 1.0;

    LineSearch ls(objective, x, dir, opts);
    if (!ls.run(f, slope, alpha0)) {
      if (!s_hist.empty() && !reset_memory) {
        // retry once along steepest descent
        s_hist.clear(), y_hist.clear(), rho_hist.clear();
        reset_memory = true;
        continue;
      }
      result.status = Status::line_search_stalled;
      return result;
    }
    reset_memory = false;

    std::vector<double> s(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = ls.trial()[k] - x[k];
      y[k] = ls.grad()[k] - g[k];
    }
    const double sy = dot(s, y);
    x = ls.trial();
    g = ls.grad();
    f = ls.f();
    result.history.push_back(f);
    if (sy > 1e-300) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.memory) {
        s_hist.pop_front(), y_hist.pop_front(), rho_hist.pop_front();
      }
    }
    if (f < result.f) {
      result.x = x;
      result.f = f;
      result.gradient_norm = inf_norm(g);
      no_improvement = 0;
    } else if (++no_improvement >= opts.divergence_window) {
      result.iterations = iter + 1;
      result.status = Status::diverged;
      return result;
    }
  }
}

}  // namespace shellfield::lbfgs
