#include "shellfield/rfourier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "shellfield/errors.hpp"
#include "shellfield/specfun.hpp"

namespace shellfield {

using specfun::kPi;

RadialProfile::RadialProfile(int dimension, double x0, double step, std::vector<double> values)
  : dimension_(dimension), x0_(x0), step_(step), values_(std::move(values)) {
  if (dimension_ < 1 || dimension_ > 3)
    throw ArgumentError("RadialProfile: dimension must be 1, 2 or 3");
  if (!(step_ > 0) || !std::isfinite(step_) || !std::isfinite(x0_))
    throw ArgumentError("RadialProfile: step must be positive and finite");
  if (values_.size() < 2)
    throw ArgumentError("RadialProfile: at least two samples are required");
  for (double v : values_)
    if (!std::isfinite(v))
      throw ArgumentError("RadialProfile: non-finite sample");
}

double RadialProfile::interpolate(double x) const {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(values_.size());
  const double pos = (x - x0_) / step_;
  if (pos > double(n - 1) + 1e-9)
    return 0.0;
  if (pos <= 0 && x0_ != 0)
    return values_.front();
  const bool reflect = x0_ == 0;
  auto at = [&](std::ptrdiff_t i) {
    if (i < 0 && reflect)
      i = -i;
    return values_[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, n - 1))];
  };
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) <= 1e-12 * std::max(1.0, std::abs(pos)))
    return at(static_cast<std::ptrdiff_t>(nearest));
  if (n < 4) {
    const std::ptrdiff_t i = std::clamp<std::ptrdiff_t>(std::ptrdiff_t(std::floor(pos)), 0, n - 2);
    const double u = pos - double(i);
    return (1 - u) * at(i) + u * at(i + 1);
  }
  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(std::floor(pos));
  // stencil i-1 .. i+2, shifted to stay inside the grid on the right (and on
  // the left unless reflection supplies the missing sample)
  std::ptrdiff_t first = i - 1;
  if (first + 3 > n - 1)
    first = n - 4;
  if (first < 0 && !reflect)
    first = 0;
  const double u = pos - double(first);
  const double f0 = at(first), f1 = at(first + 1), f2 = at(first + 2), f3 = at(first + 3);
  // Lagrange basis on nodes 0, 1, 2, 3
  const double l0 = -(u - 1) * (u - 2) * (u - 3) / 6.0;
  const double l1 = u * (u - 2) * (u - 3) / 2.0;
  const double l2 = -u * (u - 1) * (u - 3) / 2.0;
  const double l3 = u * (u - 1) * (u - 2) / 6.0;
  return l0 * f0 + l1 * f1 + l2 * f2 + l3 * f3;
}

namespace rfourier {

namespace {

// Resolves features of width down to ~1e-9 of the first panel at the origin.
constexpr int kOriginGrading = 30;

void check_dim(int dim) {
  if (dim < 1 || dim > 3)
    throw ArgumentError("dimension must be 1, 2 or 3, got " + std::to_string(dim));
}

quadrature::AdaptiveOptions options(const QuadratureSpec& q) {
  return {q.abs_tol, q.rel_tol, q.max_subdivisions};
}

// Radial transform kernel times the Jacobian, for frequency `freq` at radius r.
double kernel(int dim, double r, double freq) {
  const double arg = 2.0 * kPi * freq * r;
  switch (dim) {
    case 1: return 2.0 * std::cos(arg);
    case 2: return 2.0 * kPi * r * specfun::bessel_j0(arg);
    default: return 4.0 * kPi * r * r * specfun::sinc(arg);
  }
}

quadrature::Estimate transform(int dim, const RadialFunction& f, double freq, double upper,
                               const QuadratureSpec& q) {
  check_dim(dim);
  q.validate();
  if (!(freq >= 0) || !std::isfinite(freq))
    throw DomainError("radial transform: frequency/radius must be finite and >= 0");
  double width = upper / 16.0;
  if (freq > 0)
    width = std::min(width, 0.25 / freq);
  const auto edges = quadrature::panel_edges(0.0, upper, {}, width);
  return quadrature::integrate(
      [&](double r) { return f(r) * kernel(dim, r, freq); }, edges, options(q));
}

}  // namespace

void QuadratureSpec::validate() const {
  if (abs_tol < 0 || rel_tol < 0 || (abs_tol == 0 && rel_tol == 0))
    throw ArgumentError("QuadratureSpec: tolerances must be >= 0 and not both zero");
  if (max_subdivisions < 1)
    throw ArgumentError("QuadratureSpec: max_subdivisions must be positive");
  if (!(upper_cutoff > 0) || !std::isfinite(upper_cutoff))
    throw ArgumentError("QuadratureSpec: upper_cutoff must be positive");
}

QuadratureSpec QuadratureSpec::for_gaussian(double nu, double mu) {
  QuadratureSpec q;
  q.upper_cutoff = mu + 10.0 * std::sqrt(nu);
  return q;
}

quadrature::Estimate radial_ft(int dim, const RadialFunction& f, double s,
                               const QuadratureSpec& q) {
  return transform(dim, f, s, q.upper_cutoff, q);
}

quadrature::Estimate radial_ft(int dim, const RadialProfile& f, double s,
                               const QuadratureSpec& q) {
  if (f.dimension() != dim)
    throw ArgumentError("radial_ft: profile dimension does not match");
  const double upper = std::min(q.upper_cutoff, f.x_end());
  return transform(dim, [&f](double x) { return f.interpolate(x); }, s, upper, q);
}

quadrature::Estimate radial_ift_truncated(int dim, const RadialFunction& F, double x,
                                          double s_max, const QuadratureSpec& q) {
  if (!(s_max > 0) || !std::isfinite(s_max))
    throw DomainError("radial_ift_truncated: s_max must be positive");
  return transform(dim, F, x, s_max, q);
}

quadrature::Estimate radial_convolve(int dim, const RadialFunction& f, const RadialFunction& g,
                                     double x, const QuadratureSpec& q) {
  q.validate();
  if (dim != 1 && dim != 3)
    throw ArgumentError("radial_convolve: only N = 1 and N = 3 are supported");
  if (!(x >= 0) || !std::isfinite(x))
    throw DomainError("radial_convolve: x must be finite and >= 0");
  const double R = q.upper_cutoff;
  const auto opts = options(q);
  const double bp[] = {x};
  const auto edges = quadrature::panel_edges(0.0, R, bp, R / 16.0, kOriginGrading);

  if (dim == 1) {
    auto fr = [&](double r) { return r <= R ? f(r) : 0.0; };
    return quadrature::integrate(
        [&](double t) { return g(t) * (fr(std::abs(x - t)) + fr(x + t)); }, edges, opts);
  }

  if (x == 0) {
    return quadrature::integrate(
        [&](double r) { return 4.0 * kPi * r * r * f(r) * g(r); }, edges, opts);
  }

  double inner_error = 0.0;
  auto inner = [&](double t) {
    const double lo = std::abs(x - t);
    const double hi = std::min(x + t, R);
    if (hi <= lo)
      return 0.0;
    const double e[] = {lo, 0.5 * (lo + hi), hi};
    const auto est = quadrature::integrate([&](double r) { return r * f(r); }, e, opts);
    inner_error = std::max(inner_error, est.error);
    return est.value;
  };
  auto outer = quadrature::integrate([&](double t) { return t * g(t) * inner(t); }, edges, opts);
  const double scale = 2.0 * kPi / x;
  outer.value *= scale;
  outer.error = outer.error * scale + inner_error;
  return outer;
}

RadialProfile sample_profile(const RadialFunction& f, double x0, double step,
                             std::size_t count, int dim) {
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i)
    values[i] = f(x0 + step * double(i));
  return RadialProfile(dim, x0, step, std::move(values));
}

}  // namespace rfourier
}  // namespace shellfield
