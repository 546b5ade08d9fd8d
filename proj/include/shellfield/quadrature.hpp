// Globally adaptive Gauss-Kronrod (7/15) integration over a set of panels.

#ifndef SHELLFIELD_QUADRATURE_HPP_
#define SHELLFIELD_QUADRATURE_HPP_

#include <functional>
#include <span>
#include <vector>

namespace shellfield::quadrature {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  // Bisections allowed after the initial panels are laid out.
  int max_subdivisions = 20000;
};

// Single 15-point Kronrod rule with the embedded 7-point Gauss estimate.
Estimate gauss_kronrod15(const std::function<double(double)>& f, double a, double b);

// Integrates f over the panels delimited by the sorted `edges` (at least two),
// bisecting the panel with the largest error estimate until the total error
// is below max(abs_tol, rel_tol |value|). Throws QuadratureError when the
// subdivision budget runs out.
Estimate integrate(const std::function<double(double)>& f, std::span<const double> edges,
                   const AdaptiveOptions& opts);

// Panel edges on [a, b]: the given interior breakpoints, every panel no wider
// than max_width (if > 0), and, when grade_levels > 0, extra edges at
// a + (first panel width) 2^-k, k = 1..grade_levels, to resolve features
// concentrated at the lower endpoint.
std::vector<double> panel_edges(double a, double b, std::span<const double> breakpoints,
                                double max_width, int grade_levels = 0);

}  // namespace shellfield::quadrature

#endif  // SHELLFIELD_QUADRATURE_HPP_
