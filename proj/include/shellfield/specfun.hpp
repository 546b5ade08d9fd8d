// Special functions needed by the shell-function closed forms.
//
// Every function is pure and thread-safe. Arguments outside the domain throw
// DomainError; sinhc beyond |x| > kSinhcLimit throws RangeError. Series and
// continued-fraction loops are controlled by an AccuracySpec whose default
// targets full double precision.

#ifndef SHELLFIELD_SPECFUN_HPP_
#define SHELLFIELD_SPECFUN_HPP_

namespace shellfield::specfun {

// Stopping rule for series and continued fractions: stop once the last
// correction is below max(abs_tol, rel_tol * |partial sum|).
struct AccuracySpec {
  double abs_tol = 0.0;
  double rel_tol = 1e-17;
  int max_terms = 500;

  // Throws ArgumentError if both tolerances are zero or max_terms < 1.
  void validate() const;
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSinhcLimit = 700.0;

double erf(double x);

// sin(x)/x with sinc(0) = 1.
double sinc(double x);
// sinh(x)/x with sinhc(0) = 1; RangeError for |x| > kSinhcLimit.
double sinhc(double x);

// Si(x) = integral of sin(t)/t over [0, x]; odd in x.
double sine_integral(double x, const AccuracySpec& acc = {});

double bessel_j0(double x, const AccuracySpec& acc = {});
double bessel_j1(double x, const AccuracySpec& acc = {});

// I0(x) exp(-x) for x >= 0. The unscaled I0 is not provided.
double bessel_i0_scaled(double x, const AccuracySpec& acc = {});
// I1(x) exp(-x) for x >= 0.
double bessel_i1_scaled(double x, const AccuracySpec& acc = {});

}  // namespace shellfield::specfun

#endif  // SHELLFIELD_SPECFUN_HPP_
