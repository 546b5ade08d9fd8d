#include "shellfield/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "shellfield/errors.hpp"
#include "shellfield/specfun.hpp"

namespace shellfield::imaging {

namespace {

constexpr double kEightPiSq = 8.0 * specfun::kPi * specfun::kPi;

bool finite3(const std::array<double, 3>& v) {
  return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

void require_dim3(const ShellModel& m, const char* what) {
  if (m.dimension() != 3)
    throw ArgumentError(std::string(what) + ": model must be three-dimensional");
}

}  // namespace

double b_to_nu(double b) { return b / kEightPiSq; }
double nu_to_b(double nu) { return nu * kEightPiSq; }

void GaussianAtomModel::validate() const {
  if (terms.empty())
    throw ArgumentError("atom type '" + label + "' has no terms");
  for (const GaussianTerm& t : terms) {
    if (!std::isfinite(t.a))
      throw ArgumentError("atom type '" + label + "': non-finite amplitude");
    if (!(t.b >= 0) || !std::isfinite(t.b))
      throw ArgumentError("atom type '" + label + "': B must be >= 0");
  }
}

double GaussianAtomModel::total_amplitude() const {
  double s = 0.0;
  for (const GaussianTerm& t : terms)
    s += t.a;
  return s;
}

void AtomSite::validate() const {
  if (!finite3(position))
    throw ArgumentError("atom position must be finite");
  if (!(b_factor >= 0) || !std::isfinite(b_factor))
    throw ArgumentError("atom b_factor must be >= 0");
  if (!(occupancy >= 0 && occupancy <= 1))
    throw ArgumentError("atom occupancy must lie in [0, 1]");
}

void ResolutionSpec::validate() const {
  if (!(d0 > 0) || !std::isfinite(d0))
    throw DomainError("resolution d0 must be > 0");
  if (!(nu0 >= 0) || !std::isfinite(nu0))
    throw DomainError("blur nu0 must be >= 0");
}

void GridSpec::validate() const {
  if (!finite3(origin) || !finite3(spacing))
    throw ArgumentError("grid origin and spacing must be finite");
  for (int a = 0; a < 3; ++a) {
    if (!(spacing[a] > 0))
      throw ArgumentError("grid spacing must be > 0");
    if (dims[a] == 0)
      throw ArgumentError("grid dimensions must be positive");
  }
}

VolumeGrid::VolumeGrid(GridSpec spec, std::vector<double> values)
  : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.voxel_count())
    throw ArgumentError("volume data size does not match the grid dimensions");
  for (double v : values_)
    if (!std::isfinite(v))
      throw ArgumentError("volume values must be finite");
}

VolumeGrid::VolumeGrid(GridSpec spec) : spec_(spec) {
  spec_.validate();
  values_.assign(spec_.voxel_count(), 0.0);
}

std::array<double, 3> VolumeGrid::position(std::size_t i, std::size_t j, std::size_t k) const {
  return {spec_.origin[0] + spec_.spacing[0] * double(i),
          spec_.origin[1] + spec_.spacing[1] * double(j),
          spec_.origin[2] + spec_.spacing[2] * double(k)};
}

double VolumeGrid::sum() const {
  double s = 0.0;
  for (double v : values_)
    s += v;
  return s;
}

ShellModel gaussian_image_model(double a, double nu, const ResolutionSpec& res,
                                const ShellModel& pi3) {
  require_dim3(pi3, "gaussian_image_model");
  res.validate();
  if (!(nu >= 0))
    throw DomainError("gaussian_image_model: nu must be >= 0");
  std::vector<ShellTerm> terms;
  terms.reserve(pi3.size());
  for (const ShellTerm& t : pi3.terms())
    terms.push_back({a * t.kappa, res.d0 * t.mu, nu + res.d0 * res.d0 * t.nu + res.nu0});
  return ShellModel(3, std::move(terms), res.d0 * pi3.x_max(), pi3.label());
}

ShellModel atom_image_model(const GaussianAtomModel& atom, double b_n, const ResolutionSpec& res,
                            const ShellModel& pi3) {
  atom.validate();
  if (!(b_n >= 0))
    throw DomainError("atom_image_model: B must be >= 0");
  std::vector<ShellTerm> terms;
  terms.reserve(atom.terms.size() * pi3.size());
  for (const GaussianTerm& g : atom.terms) {
    const ShellModel part = gaussian_image_model(g.a, b_to_nu(b_n + g.b), res, pi3);
    terms.insert(terms.end(), part.terms().begin(), part.terms().end());
  }
  return ShellModel(3, std::move(terms), res.d0 * pi3.x_max(), atom.label);
}

double atom_image_radial(const GaussianAtomModel& atom, double b_n, const ResolutionSpec& res,
                         const ShellModel& pi3, double x) {
  return shells::shell_sum_eval(atom_image_model(atom, b_n, res, pi3), x);
}

ShellModel unresolved_atom_model(const GaussianAtomModel& atom, double b_n, double nu0) {
  atom.validate();
  if (!(b_n >= 0) || !(nu0 >= 0))
    throw DomainError("unresolved_atom_model: B and nu0 must be >= 0");
  std::vector<ShellTerm> terms;
  double reach = 0.0;
  for (const GaussianTerm& g : atom.terms) {
    const double nu = b_to_nu(b_n + g.b) + nu0;
    if (!(nu > 0))
      throw DomainError("unresolved_atom_model: a term has zero width (B = 0 and nu0 = 0)");
    terms.push_back({g.a, 0.0, nu});
    reach = std::max(reach, 10.0 * std::sqrt(nu));
  }
  return ShellModel(3, std::move(terms), reach, atom.label);
}

ShellModel precompute_type_image(const RadialFunction& form_factor, double d0,
                                 const decomp::FitConfig& fit, double x_max) {
  if (!(d0 > 0))
    throw DomainError("precompute_type_image: d0 must be > 0");
  if (x_max <= 0)
    x_max = 10.0 * d0;
  const double step = fit.grid_step > 0 ? fit.grid_step : x_max / 4000.0;
  const auto count = static_cast<std::size_t>(std::llround(x_max / step)) + 1;
  rfourier::QuadratureSpec q;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i)
    values[i] = rfourier::radial_ift_truncated(3, form_factor, step * double(i), 1.0 / d0, q).value;
  RadialProfile image(3, 0.0, step, std::move(values));
  decomp::FitConfig cfg = fit;
  cfg.grid_step = 0.0;
  return decomp::decompose(3, image, cfg).model;
}

ShellModel apply_b_shift(const ShellModel& model, double b) {
  require_dim3(model, "apply_b_shift");
  if (!(b >= 0))
    throw DomainError("apply_b_shift: B must be >= 0");
  return shells::convolve_with_gaussian(model, b_to_nu(b));
}

double coulomb_blurred(double k, double nu, double x) {
  if (!(nu > 0))
    throw DomainError("coulomb_blurred: nu must be > 0");
  x = std::abs(x);
  if (x == 0)
    return k * std::sqrt(2.0 / (specfun::kPi * nu));
  return k * specfun::erf(x / std::sqrt(2.0 * nu)) / x;
}

double yukawa_ft(double k, double lambda, double s) {
  if (!(lambda > 0))
    throw DomainError("yukawa_ft: lambda must be > 0");
  return 4.0 * specfun::kPi * k / (lambda * lambda + 4.0 * specfun::kPi * specfun::kPi * s * s);
}

double coulomb_resolution_image(double k, double d0, double x) {
  if (!(d0 > 0))
    throw DomainError("coulomb_resolution_image: d0 must be > 0");
  const double z = 2.0 * specfun::kPi * std::abs(x) / d0;
  const double ratio = z == 0 ? 1.0 : specfun::sine_integral(z) / z;
  return 4.0 * k / d0 * ratio;
}

double atom_cutoff_radius(const ShellModel& model, double cutoff_fraction) {
  if (!(cutoff_fraction > 0 && cutoff_fraction < 1))
    throw ArgumentError("cutoff fraction must lie in (0, 1)");
  const double decades = std::log(1.0 / cutoff_fraction);
  double r = 0.0;
  for (const ShellTerm& t : model.terms())
    r = std::max(r, t.mu + std::sqrt(2.0 * t.nu * decades));
  return r;
}

SynthesisResult synthesize_map(const std::vector<AtomSite>& atoms,
                               const std::map<std::string, ShellModel>& type_models,
                               const ResolutionSpec& res, const GridSpec& grid,
                               const SynthesisOptions& options) {
  res.validate();
  grid.validate();
  std::vector<std::string> missing;
  for (const AtomSite& a : atoms) {
    a.validate();
    if (!type_models.count(a.type_label) &&
        std::find(missing.begin(), missing.end(), a.type_label) == missing.end())
      missing.push_back(a.type_label);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing)
      list += (list.empty() ? "" : ", ") + m;
    throw LookupError("no model for atom type(s): " + list);
  }
  for (const auto& [label, model] : type_models)
    require_dim3(model, ("type model '" + label + "'").c_str());

  SynthesisResult out{VolumeGrid(grid), {}};
  const double diagonal = std::sqrt(std::pow(grid.spacing[0] * double(grid.dims[0] - 1), 2) +
                                    std::pow(grid.spacing[1] * double(grid.dims[1] - 1), 2) +
                                    std::pow(grid.spacing[2] * double(grid.dims[2] - 1), 2));

  struct Placed {
    ShellModel model;
    std::array<double, 3> centre;
    double radius;
  };
  std::vector<Placed> placed;
  placed.reserve(atoms.size());
  for (std::size_t n = 0; n < atoms.size(); ++n) {
    const AtomSite& a = atoms[n];
    if (a.occupancy == 0)
      continue;
    const ShellModel& type = type_models.at(a.type_label);
    std::vector<ShellTerm> terms = shells::convolve_with_gaussian(type, b_to_nu(a.b_factor) + res.nu0).terms();
    for (ShellTerm& t : terms)
      t.kappa *= a.occupancy;
    ShellModel m(3, std::move(terms), type.x_max(), type.label());
    const double radius = atom_cutoff_radius(m, options.cutoff_fraction);
    if (radius > diagonal) {
      std::ostringstream msg;
      msg << "atom " << n << " (" << a.type_label << "): cutoff radius " << radius
          << " exceeds the grid diagonal " << diagonal;
      out.warnings.push_back(msg.str());
    }
    placed.push_back({std::move(m), a.position, radius});
  }

  const std::size_t nz = grid.dims[2];
  unsigned workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, nz));
  VolumeGrid& vol = out.volume;

  auto index_range = [&](int axis, double centre, double radius, std::size_t& lo, std::size_t& hi) {
    const double a = std::ceil((centre - radius - grid.origin[axis]) / grid.spacing[axis]);
    const double b = std::floor((centre + radius - grid.origin[axis]) / grid.spacing[axis]);
    const double last = double(grid.dims[axis] - 1);
    if (b < 0 || a > last) {
      lo = 1;
      hi = 0;
      return;
    }
    lo = static_cast<std::size_t>(std::max(0.0, a));
    hi = static_cast<std::size_t>(std::min(last, b));
  };

  auto slab = [&](std::size_t k_begin, std::size_t k_end) {
    for (const Placed& p : placed) {
      std::size_t i0, i1, j0, j1, k0, k1;
      index_range(0, p.centre[0], p.radius, i0, i1);
      index_range(1, p.centre[1], p.radius, j0, j1);
      index_range(2, p.centre[2], p.radius, k0, k1);
      if (i0 > i1 || j0 > j1 || k0 > k1)
        continue;
      k0 = std::max(k0, k_begin);
      k1 = std::min(k1, k_end - 1);
      for (std::size_t k = k0; k <= k1 && k0 <= k1; ++k)
        for (std::size_t j = j0; j <= j1; ++j)
          for (std::size_t i = i0; i <= i1; ++i) {
            const auto pos = vol.position(i, j, k);
            const double dx = pos[0] - p.centre[0], dy = pos[1] - p.centre[1], dz = pos[2] - p.centre[2];
            const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
            if (r <= p.radius)
              vol.values()[vol.index(i, j, k)] += shells::shell_sum_eval(p.model, r);
          }
    }
  };

  if (workers <= 1) {
    slab(0, nz);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = nz * w / workers, e = nz * (w + 1) / workers;
      if (b < e)
        pool.emplace_back(slab, b, e);
    }
    for (auto& t : pool)
      t.join();
  }
  return out;
}

}  // namespace shellfield::imaging
