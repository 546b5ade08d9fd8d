// Decomposition of a sampled radial function into a shell series: ripple
// detection, per-ripple initial terms, and L-BFGS refinement of all
// (kappa, mu, nu), optionally growing the series from residual peaks.

#ifndef SHELLFIELD_DECOMP_HPP_
#define SHELLFIELD_DECOMP_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shellfield/errors.hpp"
#include "shellfield/rfourier.hpp"
#include "shellfield/shells.hpp"

namespace shellfield::decomp {

// One same-sign lobe of the target. The lobe touching the origin is mirrored
// through it (x_lo = -x_hi) since radial components are even.
struct Ripple {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double x_ext = 0.0;
  double value_ext = 0.0;
  int sign = 1;
};

enum class WeightMode { uniform, radial };

struct ResidualStrategy {
  enum class Kind { one_term_per_ripple, add_until_accuracy };
  Kind kind = Kind::one_term_per_ripple;
  double accuracy = 0.0;       // target max abs error for add_until_accuracy
  std::size_t max_terms = 64;  // term budget for add_until_accuracy
};

struct FitConfig {
  // Fit grid spacing; 0 fits on the target's own samples.
  double grid_step = 0.0;
  WeightMode weight_mode = WeightMode::uniform;
  int max_iterations = 2000;
  double gradient_tol = 1e-12;
  ResidualStrategy residual_strategy;

  // ArgumentError if a field is out of range for a target reaching x_max.
  void validate(double x_max) const;
};

struct FitReport {
  double max_abs_error = 0.0;
  double rms_error = 0.0;
  int iterations = 0;
  bool converged = false;
  // infinity norm of the objective gradient at the returned model
  double gradient_norm = 0.0;
  // max abs error inside each ripple bracket of the target
  std::vector<double> per_ripple_errors;
  // objective at each accepted iterate of the last refinement
  std::vector<double> objective_history;
};

struct FitResult {
  ShellModel model;
  FitReport report;
};

// Thrown when refinement diverges; carries the best model seen.
struct OptimizationError : Error {
  OptimizationError(const std::string& msg, FitResult best)
    : Error(msg), best(std::move(best)) {}
  FitResult best;
};

std::vector<Ripple> detect_ripples(const RadialProfile& target);

// One term per ripple: mu at the extremum (0 for the lobe at the origin),
// nu = (bracket width / 4)^2 clamped at 1e-6, kappa matching the extremum.
ShellModel init_terms(int dim, std::span<const Ripple> ripples, double x_max);

FitResult refine(const ShellModel& model, const RadialProfile& target, const FitConfig& config);

// detect -> init -> refine, then for add_until_accuracy repeatedly add a term
// at the largest residual lobe and refine again.
FitResult decompose(int dim, const RadialProfile& target, const FitConfig& config);

// Max and rms abs error of a model against a profile.
FitReport evaluate_fit(const ShellModel& model, const RadialProfile& target);

// Weighted least-squares objective 0.5 sum_i w_i r_i^2 (weights normalized
// to unit sum) with the linear weights eliminated: for given radii and widths
// the kappas solve the weighted linear least-squares problem exactly, so the
// optimizer only sees the packed nonlinear parameters (mu_m, log nu_m). The
// model reads |mu|. By the envelope theorem the gradient is the partial
// gradient at the optimal kappas.
class Objective {
public:
  Objective(int dim, const RadialProfile& target, const FitConfig& config);

  double operator()(std::span<const double> params, std::span<double> grad) const;

  // Optimal kappas for the given nonlinear parameters.
  std::vector<double> solve_kappa(std::span<const double> params) const;

  static std::vector<double> pack(const ShellModel& model);
  ShellModel unpack(std::span<const double> params, double x_max, const std::string& label) const;

private:
  struct Design;
  bool build(std::span<const double> params, Design& d, bool with_gradient) const;

  int dim_;
  std::vector<double> x_;
  std::vector<double> f_;
  std::vector<double> w_;
  double step_;
  double x0_;
};

// Bundled published tables.
// names: pi3_interference (alias pi3), pi1_interference (pi1),
// pi2_interference (pi2), si_over_x.
ShellModel bundled_table(std::string_view name);
// Maximal discrepancy the published table was reported with.
double bundled_table_max_error(std::string_view name);
std::vector<std::string> bundled_table_names();

// The function the si_over_x table approximates: Si(u)/u with u = 2 pi x,
// i.e. the unit-resolution image of a point charge with K = 1/4.
double si_over_x(double x);

}  // namespace shellfield::decomp

#endif  // SHELLFIELD_DECOMP_HPP_
