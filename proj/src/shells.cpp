#include "shellfield/shells.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "shellfield/errors.hpp"
#include "shellfield/specfun.hpp"

namespace shellfield {

using specfun::kPi;

ShellModel::ShellModel(int dimension, std::vector<ShellTerm> terms, double x_max,
                       std::string label)
  : dimension_(dimension), terms_(std::move(terms)), x_max_(x_max),
    label_(std::move(label)) {
  if (dimension_ < 1 || dimension_ > 3)
    throw ArgumentError("ShellModel: dimension must be 1, 2 or 3");
  if (terms_.empty())
    throw ArgumentError("ShellModel: at least one term is required");
  if (!(x_max_ > 0) || !std::isfinite(x_max_))
    throw ArgumentError("ShellModel: x_max must be positive");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const ShellTerm& t = terms_[i];
    if (!(t.nu > 0) || !std::isfinite(t.nu) || !(t.mu >= 0) || !std::isfinite(t.mu) ||
        !std::isfinite(t.kappa))
      throw ArgumentError("ShellModel: invalid term " + std::to_string(i + 1) +
                          " (need nu > 0, mu >= 0, finite kappa)");
  }
}

ShellModel ShellModel::truncated(std::size_t count) const {
  if (count == 0 || count > terms_.size())
    throw ArgumentError("ShellModel::truncated: count " + std::to_string(count) +
                        " outside 1.." + std::to_string(terms_.size()));
  return ShellModel(dimension_, {terms_.begin(), terms_.begin() + count}, x_max_, label_);
}

ShellModel ShellModel::with_label(std::string label) const {
  ShellModel copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

namespace shells {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > 3)
    throw ArgumentError("dimension must be 1, 2 or 3, got " + std::to_string(dim));
}

void check_args(int dim, double x, double mu, double nu, const char* fn) {
  check_dim(dim);
  if (!std::isfinite(x) || !std::isfinite(mu) || !std::isfinite(nu))
    throw DomainError(std::string(fn) + ": non-finite argument");
  if (x < 0)
    throw DomainError(std::string(fn) + ": x must be >= 0");
  if (mu < 0)
    throw DomainError(std::string(fn) + ": mu must be >= 0");
  if (!(nu > 0))
    throw DomainError(std::string(fn) + ": nu must be > 0");
}

// (2 pi nu)^(-N/2)
double gauss_norm(int dim, double nu) {
  const double w = 2.0 * kPi * nu;
  switch (dim) {
    case 1: return 1.0 / std::sqrt(w);
    case 2: return 1.0 / w;
    default: return 1.0 / (w * std::sqrt(w));
  }
}

// B_N(t): the bracket that tends to a constant as t -> infinity, with
// Omega_N = (2 pi nu)^(-N/2) exp(-(x - mu)^2 / 2 nu) B_N(t).
double bracket(int dim, double t) {
  switch (dim) {
    case 1: return 0.5 * (1.0 + std::exp(-2.0 * t));
    case 2: return specfun::bessel_i0_scaled(t);
    default: return -std::expm1(-2.0 * t) / (2.0 * t);
  }
}

// Langevin function coth(t) - 1/t.
double langevin(double t) {
  if (t < 0.1) {
    const double t2 = t * t;
    return t * (1.0 / 3.0 + t2 * (-1.0 / 45.0 + t2 * (2.0 / 945.0 +
                t2 * (-1.0 / 4725.0 + t2 * (2.0 / 93555.0)))));
  }
  return 1.0 + 2.0 * std::exp(-2.0 * t) / (-std::expm1(-2.0 * t)) - 1.0 / t;
}

// d ln B_N / dt
double bracket_log_derivative(int dim, double t) {
  switch (dim) {
    case 1: return -2.0 / (std::exp(2.0 * t) + 1.0);
    case 2: {
      if (t == 0) return -1.0;
      return specfun::bessel_i1_scaled(t) / specfun::bessel_i0_scaled(t) - 1.0;
    }
    default: return langevin(t) - 1.0;
  }
}

}  // namespace

double gaussian_radial(int dim, double x, double nu) {
  check_args(dim, x, 0.0, nu, "gaussian_radial");
  return gauss_norm(dim, nu) * std::exp(-x * x / (2.0 * nu));
}

double interference_radial(int dim, double x) {
  check_dim(dim);
  if (!std::isfinite(x) || x < 0)
    throw DomainError("interference_radial: x must be finite and >= 0");
  const double u = 2.0 * kPi * x;
  switch (dim) {
    case 1:
      return 2.0 * specfun::sinc(u);
    case 2:
      if (u < 1e-8)
        return 2.0 * kPi * (0.5 - u * u / 16.0);
      return 2.0 * kPi * specfun::bessel_j1(u) / u;
    default: {
      if (u < 1e-2) {
        // (sin u - u cos u) / u^3 = sum_k (-1)^(k+1) 2k u^(2k-2) / (2k+1)!
        const double u2 = u * u;
        const double series =
            1.0 / 3.0 + u2 * (-1.0 / 30.0 + u2 * (1.0 / 840.0 +
            u2 * (-1.0 / 45360.0 + u2 * (1.0 / 3991680.0))));
        return 4.0 * kPi * series;
      }
      return 4.0 * kPi * (std::sin(u) - u * std::cos(u)) / (u * u * u);
    }
  }
}

namespace detail {

double omega_expansion_branch(int dim, double x, double mu, double nu) {
  const double t = x * mu / nu;
  const double t2 = t * t;
  double b;
  switch (dim) {
    case 1: b = 1.0 + t2 * (1.0 / 2.0 + t2 / 24.0); break;
    case 2: b = 1.0 + t2 * (1.0 / 4.0 + t2 / 64.0); break;
    default: b = 1.0 + t2 * (1.0 / 6.0 + t2 / 120.0); break;
  }
  return gauss_norm(dim, nu) * std::exp(-(x * x + mu * mu) / (2.0 * nu)) * b;
}

double omega_bracket_branch(int dim, double x, double mu, double nu) {
  const double t = x * mu / nu;
  const double d = x - mu;
  return gauss_norm(dim, nu) * std::exp(-d * d / (2.0 * nu)) * bracket(dim, t);
}

}  // namespace detail

double omega_radial(int dim, double x, double mu, double nu) {
  check_args(dim, x, mu, nu, "omega_radial");
  if (mu == 0)
    return gauss_norm(dim, nu) * std::exp(-x * x / (2.0 * nu));
  if (x * mu / nu <= kExpansionThreshold)
    return detail::omega_expansion_branch(dim, x, mu, nu);
  return detail::omega_bracket_branch(dim, x, mu, nu);
}

double omega_fourier_radial(int dim, double s, double mu, double nu) {
  check_args(dim, s, mu, nu, "omega_fourier_radial");
  const double arg = 2.0 * kPi * mu * s;
  double shell;
  switch (dim) {
    case 1: shell = std::cos(arg); break;
    case 2: shell = specfun::bessel_j0(arg); break;
    default: shell = specfun::sinc(arg); break;
  }
  return shell * std::exp(-2.0 * kPi * kPi * nu * s * s);
}

OmegaValueGradient omega_value_gradient(int dim, double x, double mu, double nu) {
  OmegaValueGradient out;
  out.value = omega_radial(dim, x, mu, nu);
  const double t = x * mu / nu;
  const double r = bracket_log_derivative(dim, t);
  const double d = x - mu;
  out.grad.d_x = out.value * (-d + r * mu) / nu;
  out.grad.d_mu = out.value * (d + r * x) / nu;
  out.grad.d_nu = out.value * (-0.5 * dim / nu + d * d / (2.0 * nu * nu) - r * t / nu);
  return out;
}

OmegaGradient omega_gradient(int dim, double x, double mu, double nu) {
  return omega_value_gradient(dim, x, mu, nu).grad;
}

double shell_sum_eval(const ShellModel& model, double x,
                      std::optional<std::size_t> truncate_to) {
  std::size_t count = model.size();
  if (truncate_to) {
    if (*truncate_to == 0 || *truncate_to > model.size())
      throw ArgumentError("shell_sum_eval: truncate_to " + std::to_string(*truncate_to) +
                          " outside 1.." + std::to_string(model.size()));
    count = *truncate_to;
  }
  double sum = 0.0;
  const auto& terms = model.terms();
  for (std::size_t m = 0; m < count; ++m)
    sum += terms[m].kappa * omega_radial(model.dimension(), x, terms[m].mu, terms[m].nu);
  return sum;
}

ShellModel convolve_with_gaussian(const ShellModel& model, double nu0) {
  if (!(nu0 >= 0) || !std::isfinite(nu0))
    throw DomainError("convolve_with_gaussian: nu0 must be >= 0");
  std::vector<ShellTerm> terms = model.terms();
  for (ShellTerm& t : terms)
    t.nu += nu0;
  return ShellModel(model.dimension(), std::move(terms), model.x_max(), model.label());
}

ShellModel rescale(const ShellModel& model, double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha))
    throw DomainError("rescale: alpha must be > 0");
  std::vector<ShellTerm> terms = model.terms();
  for (ShellTerm& t : terms) {
    t.mu *= alpha;
    t.nu *= alpha * alpha;
  }
  return ShellModel(model.dimension(), std::move(terms), alpha * model.x_max(), model.label());
}

double chi(int dim, double t) {
  check_dim(dim);
  if (!(t >= 0))
    throw DomainError("chi: t must be >= 0");
  const double t2 = t * t;
  switch (dim) {
    case 1:
      if (t < 1e-4) return 1.0 - t2 / 3.0;
      return std::tanh(t) / t;
    case 2:
      if (t < 1e-4) return 0.5 - t2 / 16.0;
      return specfun::bessel_i1_scaled(t) / (t * specfun::bessel_i0_scaled(t));
    default:
      if (t < 1e-4) return 1.0 / 3.0 - t2 / 45.0;
      return langevin(t) / t;
  }
}

PeakReport peak_location(int dim, double mu, double nu) {
  check_args(dim, 0.0, mu, nu, "peak_location");
  PeakReport report;
  if (mu * mu <= dim * nu)
    return report;
  // chi decreases from 1/N to 0 and chi(t) < 1/t, so the root of
  // chi(t) = nu / mu^2 lies in (0, mu^2 / nu).
  const double level = nu / (mu * mu);
  double lo = 0.0;
  double hi = mu * mu / nu;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi(dim, mid) > level)
      lo = mid;
    else
      hi = mid;
  }
  const double t = 0.5 * (lo + hi);
  const double x = t * nu / mu;
  report.kind = PeakReport::Kind::interior_peak;
  report.x_peak = x;
  report.value_at_peak = omega_radial(dim, x, mu, nu);
  return report;
}

}  // namespace shells
}  // namespace shellfield
