// Test-only reference numerics. Nothing here shares code with the library:
// integrals use adaptive Simpson with Richardson correction or the periodic
// trapezoidal rule, never the library's Gauss-Kronrod integrator.

#ifndef SHELLFIELD_TESTS_ORACLES_HPP_
#define SHELLFIELD_TESTS_ORACLES_HPP_

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline constexpr double pi = 3.141592653589793238462643383279502884;

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b,
                           double fa, double fm, double fb, double whole, double tol,
                           int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson over `panels` equal sub-intervals of [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-13, int panels = 64, int depth = 40) {
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + h * i, hi = (i + 1 == panels) ? b : a + h * (i + 1);
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    sum += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / panels, depth);
  }
  return sum;
}

// Trapezoidal rule for a 2pi-periodic integrand over one period; converges
// geometrically for analytic integrands.
inline double periodic_trapezoid(const std::function<double(double)>& f, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += f(2.0 * pi * i / n);
  return sum * 2.0 * pi / n;
}

// J_n(x) = (1/2pi) int_0^{2pi} cos(n th - x sin th) d th
inline double bessel_j(int n, double x) {
  const int pts = 64 + 2 * static_cast<int>(std::abs(x));
  return periodic_trapezoid([&](double th) { return std::cos(n * th - x * std::sin(th)); },
                            pts) / (2.0 * pi);
}

// I_n(x) e^{-x} = (1/2pi) int_0^{2pi} e^{x (cos th - 1)} cos(n th) d th,
// i.e. the integral representation evaluated in log space.
inline double bessel_i_scaled(int n, double x) {
  const int pts = 64 + 4 * static_cast<int>(std::sqrt(x) * 8.0);
  return periodic_trapezoid(
             [&](double th) { return std::exp(x * (std::cos(th) - 1.0)) * std::cos(n * th); },
             pts) / (2.0 * pi);
}

inline double erf(double x) {
  return 2.0 / std::sqrt(pi) * simpson([](double t) { return std::exp(-t * t); }, 0.0, x, 1e-15);
}

inline double sine_integral(double x) {
  auto sinc = [](double t) { return t == 0 ? 1.0 : std::sin(t) / t; };
  const int panels = 64 + static_cast<int>(x);
  return simpson(sinc, 0.0, x, 1e-14, panels);
}

// Bisection on a sign change of f in [a, b].
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-13) {
  double fa = f(a);
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * double(i) / (n - 1));
  return g;
}

// Closed-form references, transcribed independently of the library code.
inline double gauss(int dim, double x, double nu) {
  return std::pow(2.0 * pi * nu, -0.5 * dim) * std::exp(-x * x / (2.0 * nu));
}

inline double interference(int dim, double x) {
  const double u = 2.0 * pi * x;
  if (dim == 1) return u == 0 ? 2.0 : 2.0 * std::sin(u) / u;
  if (dim == 2) return u == 0 ? pi : 2.0 * pi * bessel_j(1, u) / u;
  if (u == 0) return 4.0 * pi / 3.0;
  return 4.0 * pi * (std::sin(u) - u * std::cos(u)) / (u * u * u);
}

// Omega_N from the direct-form expressions (difference of Gaussians for
// N = 1, 3; I0 through the integral oracle for N = 2). Suitable for moderate
// x mu / nu only.
inline double omega(int dim, double x, double mu, double nu) {
  if (mu == 0) return gauss(dim, x, nu);
  const double a = std::exp(-(x - mu) * (x - mu) / (2.0 * nu));
  const double b = std::exp(-(x + mu) * (x + mu) / (2.0 * nu));
  if (dim == 1) return 0.5 / std::sqrt(2.0 * pi * nu) * (a + b);
  if (dim == 3) {
    if (x == 0) return std::pow(2.0 * pi * nu, -1.5) * std::exp(-mu * mu / (2.0 * nu));
    return 1.0 / (4.0 * pi * x * mu) / std::sqrt(2.0 * pi * nu) * (a - b);
  }
  const double t = x * mu / nu;
  return 1.0 / (2.0 * pi * nu) * std::exp(-(x - mu) * (x - mu) / (2.0 * nu)) *
         bessel_i_scaled(0, t);
}

}  // namespace oracle

#endif  // SHELLFIELD_TESTS_ORACLES_HPP_
