// Shell functions Omega_N(x; mu, nu): a uniform spherical shell of radius mu
// in N dimensions (N = 1, 2, 3) blurred by an isotropic Gaussian of variance
// nu. Only radial components are evaluated; callers reduce vectors to |x|.

#ifndef SHELLFIELD_SHELLS_HPP_
#define SHELLFIELD_SHELLS_HPP_

#include <optional>
#include <string>
#include <vector>

namespace shellfield {

// One weighted shell: kappa * Omega_N(x; mu, nu).
struct ShellTerm {
  double kappa = 0.0;
  double mu = 0.0;
  double nu = 1.0;

  bool operator==(const ShellTerm&) const = default;
};

// Ordered sum of shell terms in a fixed dimension, valid for |x| <= x_max.
// Immutable once constructed; transformations return new models.
class ShellModel {
public:
  // Throws ArgumentError for an empty term list, dimension outside 1..3,
  // x_max <= 0, nu <= 0, mu < 0 or a non-finite kappa.
  ShellModel(int dimension, std::vector<ShellTerm> terms, double x_max,
             std::string label = {});

  int dimension() const { return dimension_; }
  const std::vector<ShellTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  double x_max() const { return x_max_; }
  const std::string& label() const { return label_; }

  // First `count` terms; ArgumentError if count is 0 or exceeds size().
  ShellModel truncated(std::size_t count) const;
  ShellModel with_label(std::string label) const;

  bool operator==(const ShellModel&) const = default;

private:
  int dimension_;
  std::vector<ShellTerm> terms_;
  double x_max_;
  std::string label_;
};

namespace shells {

// Crossover t = x mu / nu between the small-t expansion and the bracket forms.
inline constexpr double kExpansionThreshold = 1e-4;

// (2 pi nu)^(-N/2) exp(-x^2 / 2 nu)
double gaussian_radial(int dim, double x, double nu);

// Radial component of the inverse Fourier transform of the unit-ball indicator.
// Equals the unit-ball volume at x = 0.
double interference_radial(int dim, double x);

double omega_radial(int dim, double x, double mu, double nu);

// Radial Fourier transform of Omega_N: P0_N(s; mu) exp(-2 pi^2 nu s^2).
double omega_fourier_radial(int dim, double s, double mu, double nu);

struct OmegaGradient {
  double d_x = 0.0;
  double d_mu = 0.0;
  double d_nu = 0.0;
};

OmegaGradient omega_gradient(int dim, double x, double mu, double nu);

// Value and gradient together; the gradient reuses the value.
struct OmegaValueGradient {
  double value = 0.0;
  OmegaGradient grad;
};
OmegaValueGradient omega_value_gradient(int dim, double x, double mu, double nu);

// Sum of the first `truncate_to` terms (all terms if absent).
double shell_sum_eval(const ShellModel& model, double x,
                      std::optional<std::size_t> truncate_to = std::nullopt);

// Convolution with g_N(nu0) adds nu0 to every term's nu.
ShellModel convolve_with_gaussian(const ShellModel& model, double nu0);

// Terms become (kappa, alpha mu, alpha^2 nu) and x_max -> alpha x_max, so that
// alpha^N * sum(rescaled, x) == sum(model, x / alpha). The alpha^N amplitude is
// left to the caller.
ShellModel rescale(const ShellModel& model, double alpha);

struct PeakReport {
  enum class Kind { monotone_decreasing, interior_peak };
  Kind kind = Kind::monotone_decreasing;
  std::optional<double> x_peak;
  std::optional<double> value_at_peak;
};

// Maximum of Omega_N on x > 0. Interior peak iff mu^2 > N nu.
PeakReport peak_location(int dim, double mu, double nu);

// chi_N(t): the decreasing function whose level 1/a (a = mu^2/nu) locates the
// peak of Omega_N in the rescaled variable t = x mu / nu. chi_N(0) = 1/N.
double chi(int dim, double t);

namespace detail {
// The two evaluation branches of omega_radial, exposed for continuity tests.
double omega_expansion_branch(int dim, double x, double mu, double nu);
double omega_bracket_branch(int dim, double x, double mu, double nu);
}  // namespace detail

}  // namespace shells
}  // namespace shellfield

#endif  // SHELLFIELD_SHELLS_HPP_
