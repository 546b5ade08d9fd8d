// Limited-memory BFGS with a strong-Wolfe line search (Nocedal & Wright,
// algorithms 7.4, 3.5 and 3.6).

#ifndef SHELLFIELD_LBFGS_HPP_
#define SHELLFIELD_LBFGS_HPP_

#include <functional>
#include <span>
#include <vector>

namespace shellfield::lbfgs {

// Returns f(x) and writes the gradient into grad (same size as x).
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct Options {
  int memory = 10;
  int max_iterations = 1000;
  // Stop when the infinity norm of the gradient falls to this value.
  double gradient_tol = 1e-8;
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_line_search = 40;
  // Accepted steps in a row that fail to improve on the best objective seen
  // before the run is declared divergent.
  int divergence_window = 10;
};

enum class Status {
  gradient_converged,
  max_iterations,
  // line search could not find a decreasing step: the objective is flat to
  // machine precision along the search direction
  line_search_stalled,
  diverged,
};

struct Result {
  std::vector<double> x;  // best point seen
  double f = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  Status status = Status::max_iterations;
  // objective at every accepted iterate, starting with the initial point
  std::vector<double> history;
};

Result minimize(const Objective& objective, std::vector<double> x0, const Options& opts);

}  // namespace shellfield::lbfgs

#endif  // SHELLFIELD_LBFGS_HPP_
