#include "shellfield/specfun.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "shellfield/errors.hpp"

namespace shellfield::specfun {

namespace {

// Power series for J0/J1 below this argument, Hankel asymptotics above. The
// asymptotic remainder is ~exp(-2x), i.e. ~1e-11 at the switch point.
constexpr double kBesselJSwitch = 12.0;
// Same idea for I0/I1: below, the positive power series; above, the
// exponentially scaled asymptotic expansion.
constexpr double kBesselISwitch = 20.0;
// Taylor series of Si below, continued fraction for E1(ix) above.
constexpr double kSiSwitch = 4.0;

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x))
    throw DomainError(std::string(fn) + ": non-finite argument");
}

bool converged(double term, double sum, const AccuracySpec& acc) {
  return std::abs(term) <= std::max(acc.abs_tol, acc.rel_tol * std::abs(sum));
}

// sum_k (-1)^k (x/2)^(2k+order) / (k! (k+order)!) for order 0 or 1
double bessel_j_series(int order, double x, const AccuracySpec& acc) {
  const double q = -0.25 * x * x;
  double term = order == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < acc.max_terms; ++k) {
    term *= q / (double(k) * double(k + order));
    sum += term;
    if (converged(term, sum, acc))
      break;
  }
  return sum;
}

// Hankel P and Q series: J_n(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi).
// Terms are summed until they stop decreasing (optimal truncation).
void hankel_pq(int order, double x, const AccuracySpec& acc, double& p, double& q) {
  const double mu = 4.0 * order * order;
  p = 1.0;
  q = 0.0;
  double term = 1.0;
  double prev_abs = std::numeric_limits<double>::infinity();
  for (int k = 1; k < acc.max_terms; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) >= prev_abs)
      break;
    prev_abs = std::abs(term);
    // a_k / x^k enters as P (even k, sign (-1)^(k/2)) or Q (odd k)
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (converged(term, 1.0, acc))
      break;
  }
}

// Asymptotic I_n(x) exp(-x) sqrt(2 pi x) = sum_k (-1)^k a_k(n) / x^k
double bessel_i_asymptotic(int order, double x, const AccuracySpec& acc) {
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  double prev_abs = std::numeric_limits<double>::infinity();
  for (int k = 1; k < acc.max_terms; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) >= prev_abs)
      break;
    prev_abs = std::abs(term);
    sum += term;
    if (converged(term, sum, acc))
      break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

double bessel_i_series_scaled(int order, double x, const AccuracySpec& acc) {
  const double q = 0.25 * x * x;
  double term = order == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < acc.max_terms; ++k) {
    term *= q / (double(k) * double(k + order));
    sum += term;
    if (converged(term, sum, acc))
      break;
  }
  return sum * std::exp(-x);
}

}  // namespace

void AccuracySpec::validate() const {
  if (abs_tol < 0 || rel_tol < 0 || (abs_tol == 0 && rel_tol == 0))
    throw ArgumentError("AccuracySpec: tolerances must be >= 0 and not both zero");
  if (max_terms < 1)
    throw ArgumentError("AccuracySpec: max_terms must be positive");
}

double erf(double x) {
  require_finite(x, "erf");
  return std::erf(x);
}

double sinc(double x) {
  require_finite(x, "sinc");
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

double sinhc(double x) {
  require_finite(x, "sinhc");
  if (std::abs(x) > kSinhcLimit)
    throw RangeError("sinhc: |x| above overflow threshold " + std::to_string(kSinhcLimit),
                     kSinhcLimit);
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0);
  }
  return std::sinh(x) / x;
}

double sine_integral(double x, const AccuracySpec& acc) {
  require_finite(x, "sine_integral");
  acc.validate();
  if (x < 0)
    return -sine_integral(-x, acc);
  if (x == 0)
    return 0.0;
  if (x <= kSiSwitch) {
    // sum_k (-1)^k x^(2k+1) / ((2k+1) (2k+1)!)
    const double x2 = x * x;
    double power = x;  // (-1)^k x^(2k+1) / (2k+1)!
    double sum = x;
    for (int k = 1; k < acc.max_terms; ++k) {
      power *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
      const double term = power / (2.0 * k + 1.0);
      sum += term;
      if (converged(term, sum, acc))
        break;
    }
    return sum;
  }
  // Modified Lentz evaluation of the continued fraction for E1(ix):
  // E1(ix) = exp(-ix) / (1 + ix - 1/(3 + ix - 4/(5 + ix - ...))),
  // and Si(x) = pi/2 + Im(exp(-ix) * cf).
  using cplx = std::complex<double>;
  constexpr double tiny = 1e-300;
  cplx b(1.0, x);
  cplx c(1.0 / tiny, 0.0);
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 2; i < acc.max_terms; ++i) {
    const double a = -double(i - 1) * double(i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) <= std::max(acc.rel_tol, 1e-16))
      break;
  }
  h *= cplx(std::cos(x), -std::sin(x));
  return 0.5 * kPi + h.imag();
}

double bessel_j0(double x, const AccuracySpec& acc) {
  require_finite(x, "bessel_j0");
  acc.validate();
  x = std::abs(x);
  if (x <= kBesselJSwitch)
    return bessel_j_series(0, x, acc);
  double p, q;
  hankel_pq(0, x, acc, p, q);
  const double s = std::sin(x), c = std::cos(x);
  // cos(x - pi/4), sin(x - pi/4) without forming x - pi/4
  const double cos_chi = (c + s) * M_SQRT1_2;
  const double sin_chi = (s - c) * M_SQRT1_2;
  return std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
}

double bessel_j1(double x, const AccuracySpec& acc) {
  require_finite(x, "bessel_j1");
  acc.validate();
  const double sign = x < 0 ? -1.0 : 1.0;
  x = std::abs(x);
  if (x <= kBesselJSwitch)
    return sign * bessel_j_series(1, x, acc);
  double p, q;
  hankel_pq(1, x, acc, p, q);
  const double s = std::sin(x), c = std::cos(x);
  // cos(x - 3pi/4), sin(x - 3pi/4)
  const double cos_chi = (s - c) * M_SQRT1_2;
  const double sin_chi = -(s + c) * M_SQRT1_2;
  return sign * std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
}

double bessel_i0_scaled(double x, const AccuracySpec& acc) {
  require_finite(x, "bessel_i0_scaled");
  if (x < 0)
    throw DomainError("bessel_i0_scaled: x must be >= 0");
  acc.validate();
  if (x <= kBesselISwitch)
    return bessel_i_series_scaled(0, x, acc);
  return bessel_i_asymptotic(0, x, acc);
}

double bessel_i1_scaled(double x, const AccuracySpec& acc) {
  require_finite(x, "bessel_i1_scaled");
  if (x < 0)
    throw DomainError("bessel_i1_scaled: x must be >= 0");
  acc.validate();
  if (x <= kBesselISwitch)
    return bessel_i_series_scaled(1, x, acc);
  return bessel_i_asymptotic(1, x, acc);
}

}  // namespace shellfield::specfun
