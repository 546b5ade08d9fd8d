#include "shellfield/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "shellfield/lbfgs.hpp"

namespace shellfield::decomp {

namespace {

constexpr double kMinNu = 1e-6;
// Terms are skipped where (x - mu)^2 / 2 nu exceeds this; every bracket is
// bounded by 1, so the neglected contribution is below exp(-50) of the norm.
constexpr double kExponentCutoff = 50.0;

// Parabolic vertex through (i-1, i, i+1); returns the offset in (-1, 1).
double parabolic_offset(double fm, double f0, double fp) {
  const double denom = fm - 2.0 * f0 + fp;
  if (denom == 0)
    return 0.0;
  const double off = 0.5 * (fm - fp) / denom;
  return std::clamp(off, -1.0, 1.0);
}

RadialProfile fit_grid(const RadialProfile& target, const FitConfig& config) {
  if (config.grid_step <= 0 || config.grid_step == target.step())
    return target;
  const double span = target.x_end() - target.x0();
  const auto count = static_cast<std::size_t>(std::floor(span / config.grid_step + 1e-9)) + 1;
  return rfourier::sample_profile([&](double x) { return target.interpolate(x); }, target.x0(),
                                  config.grid_step, count, target.dimension());
}

RadialProfile residual_profile(const ShellModel& model, const RadialProfile& target) {
  std::vector<double> r(target.size());
  for (std::size_t i = 0; i < target.size(); ++i)
    r[i] = target.values()[i] - shells::shell_sum_eval(model, target.x_at(i));
  return RadialProfile(target.dimension(), target.x0(), target.step(), std::move(r));
}

}  // namespace

void FitConfig::validate(double x_max) const {
  if (grid_step < 0 || (grid_step > 0 && grid_step > x_max / 100.0))
    throw ArgumentError("FitConfig: grid_step must be in (0, x_max/100] or 0 for the target grid");
  if (max_iterations < 0)
    throw ArgumentError("FitConfig: max_iterations must be >= 0");
  if (!(gradient_tol > 0))
    throw ArgumentError("FitConfig: gradient_tol must be > 0");
  if (residual_strategy.kind == ResidualStrategy::Kind::add_until_accuracy &&
      !(residual_strategy.accuracy > 0))
    throw ArgumentError("FitConfig: add_until_accuracy needs a positive accuracy");
  if (residual_strategy.max_terms < 1)
    throw ArgumentError("FitConfig: max_terms must be >= 1");
}

std::vector<Ripple> detect_ripples(const RadialProfile& target) {
  const auto& v = target.values();
  const std::size_t n = v.size();
  double max_abs = 0.0;
  for (double e : v)
    max_abs = std::max(max_abs, std::abs(e));
  std::vector<Ripple> ripples;
  if (max_abs == 0)
    return ripples;
  const double zero_tol = 1e-12 * max_abs;
  auto sign_at = [&](std::size_t i) { return std::abs(v[i]) <= zero_tol ? 0 : (v[i] > 0 ? 1 : -1); };

  struct Run {
    std::size_t first, last;  // sample indices of the run
    double lo, hi;            // bracketing crossings (NaN if open)
  };
  std::vector<Run> runs;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  bool trailing_zero = false;
  std::size_t i = 0;
  double pending_lo = nan;
  while (i < n) {
    if (sign_at(i) == 0) {
      std::size_t j = i;
      while (j + 1 < n && sign_at(j + 1) == 0)
        ++j;
      const double crossing = 0.5 * (target.x_at(i) + target.x_at(j));
      if (!runs.empty() && std::isnan(runs.back().hi))
        runs.back().hi = crossing;
      pending_lo = crossing;
      // a single zero sample at the end is a crossing on the boundary; a
      // longer zero run is a decayed tail
      if (j + 1 == n && i == j && i > 0)
        trailing_zero = true;
      i = j + 1;
      continue;
    }
    const int s = sign_at(i);
    std::size_t j = i;
    while (j + 1 < n && sign_at(j + 1) == s)
      ++j;
    Run run{i, j, pending_lo, nan};
    if (std::isnan(run.lo) && !runs.empty())
      run.lo = runs.back().hi;
    if (j + 1 < n && sign_at(j + 1) == -s) {
      // linear interpolation of the crossing between samples j and j+1
      const double a = v[j], b = v[j + 1];
      run.hi = target.x_at(j) + target.step() * a / (a - b);
    }
    runs.push_back(run);
    pending_lo = run.hi;
    i = j + 1;
  }

  for (const Run& run : runs) {
    std::size_t arg = run.first;
    for (std::size_t k = run.first; k <= run.last; ++k)
      if (std::abs(v[k]) > std::abs(v[arg]))
        arg = k;
    Ripple r;
    r.value_ext = v[arg];
    r.sign = v[arg] > 0 ? 1 : -1;
    r.x_ext = target.x_at(arg);
    if (arg > 0 && arg + 1 < n) {
      const double off = parabolic_offset(v[arg - 1], v[arg], v[arg + 1]);
      r.x_ext += off * target.step();
    } else if (arg == 0 && target.x0() == 0) {
      r.x_ext = 0.0;
    }
    r.x_lo = std::isnan(run.lo) ? target.x0() : run.lo;
    r.x_hi = std::isnan(run.hi) ? target.x_end() : run.hi;
    if (r.x_lo <= 0 && target.x0() == 0)
      r.x_lo = -r.x_hi;  // lobe at the origin, mirrored
    if (!(r.x_ext < r.x_hi))
      r.x_hi = r.x_ext + (r.x_ext - r.x_lo);  // lobe continues past the grid
    if (!(r.x_lo < r.x_ext))
      r.x_lo = r.x_ext - (r.x_hi - r.x_ext);
    ripples.push_back(r);
  }

  if (trailing_zero && !ripples.empty()) {
    // The target vanishes at the last sample: the next lobe begins exactly at
    // the boundary and its flank reaches into the fit interval.
    const Ripple& prev = ripples.back();
    const double width = prev.x_hi - std::max(prev.x_lo, 0.0);
    Ripple r;
    r.x_lo = target.x_end();
    r.x_hi = r.x_lo + width;
    r.x_ext = r.x_lo + 0.5 * width;
    r.value_ext = -prev.value_ext;
    r.sign = -prev.sign;
    ripples.push_back(r);
  }
  return ripples;
}

ShellModel init_terms(int dim, std::span<const Ripple> ripples, double x_max) {
  if (ripples.empty())
    throw ArgumentError("init_terms: no ripples");
  std::vector<ShellTerm> terms;
  for (const Ripple& r : ripples) {
    ShellTerm t;
    t.mu = r.x_lo < 0 ? 0.0 : r.x_ext;
    const double quarter = 0.25 * (r.x_hi - r.x_lo);
    t.nu = std::max(quarter * quarter, kMinNu);
    const double shape = shells::omega_radial(dim, std::max(r.x_ext, 0.0), t.mu, t.nu);
    t.kappa = shape > 0 ? r.value_ext / shape : 0.0;
    terms.push_back(t);
  }
  return ShellModel(dim, std::move(terms), x_max);
}

struct Objective::Design {
  struct Span {
    std::size_t lo = 0, hi = 0;
  };
  std::vector<Span> spans;
  std::vector<std::vector<shells::OmegaValueGradient>> cache;
  std::vector<double> kappa;
};

Objective::Objective(int dim, const RadialProfile& target, const FitConfig& config)
  : dim_(dim), step_(target.step()), x0_(target.x0()) {
  if (target.dimension() != dim)
    throw ArgumentError("Objective: target dimension does not match the model");
  const std::size_t n = target.size();
  x_.resize(n);
  f_ = target.values();
  w_.assign(n, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x_[i] = target.x_at(i);
    if (config.weight_mode == WeightMode::radial && dim > 1)
      w_[i] = std::pow(x_[i], dim - 1);
    total += w_[i];
  }
  for (double& w : w_)
    w /= total;
}

bool Objective::build(std::span<const double> p, Design& d, bool with_gradient) const {
  const std::size_t terms = p.size() / 2;
  const std::size_t n = x_.size();
  d.spans.assign(terms, {});
  d.cache.assign(terms, {});
  for (std::size_t j = 0; j < terms; ++j) {
    const double mu = std::abs(p[2 * j]);
    const double nu = std::exp(p[2 * j + 1]);
    if (!std::isfinite(mu) || !(nu > 1e-300) || !std::isfinite(nu))
      return false;
    const double reach = std::sqrt(2.0 * kExponentCutoff * nu);
    const double lo_x = (mu - reach - x0_) / step_;
    const double hi_x = (mu + reach - x0_) / step_;
    Design::Span s;
    if (hi_x >= 0 && lo_x <= double(n - 1)) {
      s.lo = static_cast<std::size_t>(std::max(0.0, std::ceil(lo_x)));
      s.hi = static_cast<std::size_t>(std::min(double(n - 1), std::floor(hi_x))) + 1;
    }
    d.spans[j] = s;
    auto& c = d.cache[j];
    c.resize(s.hi > s.lo ? s.hi - s.lo : 0);
    for (std::size_t i = s.lo; i < s.hi; ++i) {
      if (with_gradient)
        c[i - s.lo] = shells::omega_value_gradient(dim_, x_[i], mu, nu);
      else
        c[i - s.lo].value = shells::omega_radial(dim_, x_[i], mu, nu);
    }
  }

  // weighted normal equations G kappa = b over the banded design
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(terms, terms);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(terms);
  for (std::size_t j = 0; j < terms; ++j) {
    const auto& sj = d.spans[j];
    for (std::size_t i = sj.lo; i < sj.hi; ++i)
      b(j) += w_[i] * d.cache[j][i - sj.lo].value * f_[i];
    for (std::size_t k = j; k < terms; ++k) {
      const auto& sk = d.spans[k];
      const std::size_t lo = std::max(sj.lo, sk.lo), hi = std::min(sj.hi, sk.hi);
      double g = 0.0;
      for (std::size_t i = lo; i < hi; ++i)
        g += w_[i] * d.cache[j][i - sj.lo].value * d.cache[k][i - sk.lo].value;
      G(j, k) = g;
      G(k, j) = g;
    }
  }
  const double ridge = 1e-14 * G.diagonal().maxCoeff();
  G.diagonal().array() += ridge > 0 ? ridge : 1e-300;
  const Eigen::VectorXd kappa = G.ldlt().solve(b);
  if (!kappa.allFinite())
    return false;
  d.kappa.assign(kappa.data(), kappa.data() + terms);
  return true;
}

double Objective::operator()(std::span<const double> p, std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  Design d;
  if (!build(p, d, true))
    return std::numeric_limits<double>::infinity();
  const std::size_t terms = p.size() / 2;
  std::vector<double> r(x_.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = -f_[i];
  for (std::size_t j = 0; j < terms; ++j)
    for (std::size_t i = d.spans[j].lo; i < d.spans[j].hi; ++i)
      r[i] += d.kappa[j] * d.cache[j][i - d.spans[j].lo].value;
  double phi = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    phi += 0.5 * w_[i] * r[i] * r[i];
  for (std::size_t j = 0; j < terms; ++j) {
    double gm = 0.0, gn = 0.0;
    for (std::size_t i = d.spans[j].lo; i < d.spans[j].hi; ++i) {
      const double wr = w_[i] * r[i];
      const auto& vg = d.cache[j][i - d.spans[j].lo];
      gm += wr * vg.grad.d_mu;
      gn += wr * vg.grad.d_nu;
    }
    const double mu_sign = p[2 * j] < 0 ? -1.0 : 1.0;
    grad[2 * j] = d.kappa[j] * gm * mu_sign;
    grad[2 * j + 1] = d.kappa[j] * gn * std::exp(p[2 * j + 1]);
  }
  return phi;
}

std::vector<double> Objective::solve_kappa(std::span<const double> p) const {
  Design d;
  if (!build(p, d, false))
    throw ArgumentError("Objective: non-finite parameters");
  return d.kappa;
}

std::vector<double> Objective::pack(const ShellModel& model) {
  std::vector<double> p;
  p.reserve(2 * model.size());
  for (const ShellTerm& t : model.terms()) {
    p.push_back(t.mu);
    p.push_back(std::log(t.nu));
  }
  return p;
}

ShellModel Objective::unpack(std::span<const double> p, double x_max,
                             const std::string& label) const {
  const std::vector<double> kappa = solve_kappa(p);
  std::vector<ShellTerm> terms(p.size() / 2);
  for (std::size_t j = 0; j < terms.size(); ++j)
    terms[j] = {kappa[j], std::abs(p[2 * j]), std::exp(p[2 * j + 1])};
  return ShellModel(dim_, std::move(terms), x_max, label);
}

FitReport evaluate_fit(const ShellModel& model, const RadialProfile& target) {
  FitReport report;
  double sq = 0.0;
  std::vector<double> err(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    err[i] = std::abs(shells::shell_sum_eval(model, target.x_at(i)) - target.values()[i]);
    report.max_abs_error = std::max(report.max_abs_error, err[i]);
    sq += err[i] * err[i];
  }
  report.rms_error = std::sqrt(sq / double(target.size()));
  for (const Ripple& r : detect_ripples(target)) {
    double worst = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
      const double x = target.x_at(i);
      if (x >= r.x_lo && x <= r.x_hi)
        worst = std::max(worst, err[i]);
    }
    report.per_ripple_errors.push_back(worst);
  }
  return report;
}

FitResult refine(const ShellModel& model, const RadialProfile& target, const FitConfig& config) {
  if (model.dimension() != target.dimension())
    throw ArgumentError("refine: model and target dimensions differ");
  config.validate(target.x_end());
  const RadialProfile grid = fit_grid(target, config);
  const Objective objective(model.dimension(), grid, config);
  if (config.max_iterations == 0) {
    FitResult out{model, evaluate_fit(model, target)};
    out.report.converged = false;
    return out;
  }

  lbfgs::Options opts;
  opts.memory = 10;
  opts.c1 = 1e-4;
  opts.c2 = 0.9;
  opts.max_iterations = config.max_iterations;
  opts.gradient_tol = config.gradient_tol;
  // Radii are optimized in units of each term's initial width so that both
  // parameters of a term move the objective on comparable scales.
  std::vector<double> scale(2 * model.size(), 1.0);
  for (std::size_t j = 0; j < model.size(); ++j)
    scale[2 * j] = std::sqrt(model.terms()[j].nu);
  std::vector<double> z = Objective::pack(model), p(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    z[i] /= scale[i];
  const auto result = lbfgs::minimize(
      [&](std::span<const double> zz, std::span<double> g) {
        for (std::size_t i = 0; i < zz.size(); ++i)
          p[i] = zz[i] * scale[i];
        const double f = objective(p, g);
        for (std::size_t i = 0; i < g.size(); ++i)
          g[i] *= scale[i];
        return f;
      },
      std::move(z), opts);
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = result.x[i] * scale[i];

  FitResult out{objective.unpack(p, model.x_max(), model.label()), {}};
  out.report = evaluate_fit(out.model, target);
  out.report.iterations = result.iterations;
  out.report.gradient_norm = result.gradient_norm;
  out.report.converged = result.status == lbfgs::Status::gradient_converged ||
                         result.status == lbfgs::Status::line_search_stalled;
  out.report.objective_history = result.history;
  if (result.status == lbfgs::Status::diverged) {
    out.report.converged = false;
    throw OptimizationError("refine: objective failed to improve over " +
                                std::to_string(opts.divergence_window) + " accepted steps",
                            std::move(out));
  }
  return out;
}

FitResult decompose(int dim, const RadialProfile& target, const FitConfig& config) {
  if (target.dimension() != dim)
    throw ArgumentError("decompose: target dimension does not match");
  config.validate(target.x_end());
  const auto ripples = detect_ripples(target);
  if (ripples.empty())
    throw ArgumentError("decompose: target is identically zero");
  FitResult fit = refine(init_terms(dim, ripples, target.x_end()), target, config);

  const auto& strategy = config.residual_strategy;
  if (strategy.kind != ResidualStrategy::Kind::add_until_accuracy)
    return fit;
  int total_iterations = fit.report.iterations;
  while (fit.report.max_abs_error > strategy.accuracy && fit.model.size() < strategy.max_terms) {
    const auto lobes = detect_ripples(residual_profile(fit.model, target));
    if (lobes.empty())
      break;
    const Ripple* best = &lobes.front();
    for (const Ripple& r : lobes)
      if (std::abs(r.value_ext) > std::abs(best->value_ext))
        best = &r;  // strict '>' keeps the smaller x on ties
    ShellTerm term;
    const double quarter = 0.25 * (best->x_hi - best->x_lo);
    term.nu = std::max(quarter * quarter, kMinNu);
    // A residual lobe at the origin gets a small positive radius so the
    // optimizer can move it off mu = 0, where d/dmu vanishes.
    term.mu = best->x_lo < 0 ? 0.25 * best->x_hi : best->x_ext;
    const double shape = shells::omega_radial(dim, std::max(best->x_ext, 0.0), term.mu, term.nu);
    term.kappa = shape > 0 ? best->value_ext / shape : 0.0;
    std::vector<ShellTerm> terms = fit.model.terms();
    terms.push_back(term);
    fit = refine(ShellModel(dim, std::move(terms), fit.model.x_max(), fit.model.label()), target,
                 config);
    total_iterations += fit.report.iterations;
  }
  fit.report.iterations = total_iterations;
  return fit;
}

}  // namespace shellfield::decomp
