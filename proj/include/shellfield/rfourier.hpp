// Radial Fourier transforms in 1, 2 and 3 dimensions, truncated inverse
// transforms (limited-resolution images) and direct-space radial convolution.
//
// Conventions, for an isotropic f with radial component f(x):
//   N = 1:  F(s) = 2 int f(x) cos(2 pi s x) dx
//   N = 2:  F(s) = 2 pi int x f(x) J0(2 pi s x) dx
//   N = 3:  F(s) = 4 pi int x^2 f(x) sinc(2 pi s x) dx
// The inverse transform uses the same kernels with x and s exchanged.
// Integrals are evaluated by adaptive Gauss-Kronrod quadrature on panels no
// wider than a quarter period of the oscillating kernel.

#ifndef SHELLFIELD_RFOURIER_HPP_
#define SHELLFIELD_RFOURIER_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "shellfield/quadrature.hpp"

namespace shellfield {

using RadialFunction = std::function<double(double)>;

// Samples of a radial component on a uniform grid x_i = x0 + i * step.
class RadialProfile {
public:
  // ArgumentError unless step > 0, at least two samples, all finite, dimension 1..3.
  RadialProfile(int dimension, double x0, double step, std::vector<double> values);

  int dimension() const { return dimension_; }
  double x0() const { return x0_; }
  double step() const { return step_; }
  std::size_t size() const { return values_.size(); }
  double x_at(std::size_t i) const { return x0_ + step_ * double(i); }
  double x_end() const { return x_at(values_.size() - 1); }
  const std::vector<double>& values() const { return values_; }

  // Four-point Lagrange interpolation; even reflection about x = 0 when the
  // grid starts at the origin, zero beyond the last sample.
  double interpolate(double x) const;

  bool operator==(const RadialProfile&) const = default;

private:
  int dimension_;
  double x0_;
  double step_;
  std::vector<double> values_;
};

namespace rfourier {

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 20000;
  // Integration radius for direct-space integrals.
  double upper_cutoff = 10.0;

  // ArgumentError if the tolerances are both zero, negative, or the cutoff is
  // not positive.
  void validate() const;

  // Cutoff at mu + 10 standard deviations of a Gaussian or shell of width nu.
  static QuadratureSpec for_gaussian(double nu, double mu = 0.0);
};

quadrature::Estimate radial_ft(int dim, const RadialFunction& f, double s,
                               const QuadratureSpec& q);
// Profile version: integrates the interpolant up to min(cutoff, x_end).
quadrature::Estimate radial_ft(int dim, const RadialProfile& f, double s,
                               const QuadratureSpec& q);

// Inverse transform of F restricted to s <= s_max: the image at resolution
// d0 = 1 / s_max. The cutoff in q is not used.
quadrature::Estimate radial_ift_truncated(int dim, const RadialFunction& F, double x,
                                          double s_max, const QuadratureSpec& q);

// (f * g)(x) for isotropic f, g in N = 1 or 3 dimensions. Both functions are
// taken as zero beyond q.upper_cutoff. N = 3 uses
//   (f*g)(x) = (2 pi / x) int t g(t) [int_{|x-t|}^{x+t} r f(r) dr] dt
// with the x = 0 limit 4 pi int r^2 f(r) g(r) dr. g may be much narrower than f.
quadrature::Estimate radial_convolve(int dim, const RadialFunction& f, const RadialFunction& g,
                                     double x, const QuadratureSpec& q);

RadialProfile sample_profile(const RadialFunction& f, double x0, double step,
                             std::size_t count, int dim = 3);

}  // namespace rfourier
}  // namespace shellfield

#endif  // SHELLFIELD_RFOURIER_HPP_
