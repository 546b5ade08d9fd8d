#include "shellfield.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <map>
#include <new>
#include <string>
#include <vector>

#include "shellfield/decomp.hpp"
#include "shellfield/errors.hpp"
#include "shellfield/imaging.hpp"
#include "shellfield/io.hpp"
#include "shellfield/rfourier.hpp"
#include "shellfield/shells.hpp"
#include "shellfield/specfun.hpp"

#ifndef SHELLFIELD_VERSION
#define SHELLFIELD_VERSION "0.0.0"
#endif

using namespace shellfield;

struct sf_model {
  ShellModel model;
};

struct sf_profile {
  RadialProfile profile;
};

struct sf_atoms {
  io::AtomModelDocument doc;
  std::string missing;
};

struct sf_volume {
  imaging::VolumeGrid volume;
  std::vector<std::string> warnings;
};

namespace {

thread_local std::string last_error;

sf_status fail(sf_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs body, translating library exceptions into status codes.
template <class F>
sf_status guarded(F&& body) {
  try {
    body();
    return SF_OK;
  } catch (const decomp::OptimizationError& e) {
    return fail(SF_ERR_OPTIMIZATION, e.what());
  } catch (const QuadratureError& e) {
    return fail(SF_ERR_QUADRATURE, e.what());
  } catch (const RangeError& e) {
    return fail(SF_ERR_RANGE, e.what());
  } catch (const DomainError& e) {
    return fail(SF_ERR_DOMAIN, e.what());
  } catch (const ArgumentError& e) {
    return fail(SF_ERR_ARGUMENT, e.what());
  } catch (const LookupError& e) {
    return fail(SF_ERR_LOOKUP, e.what());
  } catch (const FormatError& e) {
    return fail(SF_ERR_FORMAT, e.what());
  } catch (const IoError& e) {
    return fail(SF_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SF_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* name) {
  if (!p)
    throw ArgumentError(std::string(name) + " must not be NULL");
}

RadialFunction wrap(sf_radial_fn f, void* user) {
  need(reinterpret_cast<const void*>(f), "function");
  return [f, user](double x) {
    const double v = f(x, user);
    if (!std::isfinite(v))
      throw DomainError("callback returned a non-finite value at x = " + std::to_string(x));
    return v;
  };
}

rfourier::QuadratureSpec to_spec(const sf_quadrature* q) {
  rfourier::QuadratureSpec spec;
  if (q) {
    spec.abs_tol = q->abs_tol;
    spec.rel_tol = q->rel_tol;
    spec.max_subdivisions = q->max_subdivisions;
    spec.upper_cutoff = q->upper_cutoff;
  }
  return spec;
}

sf_quadrature from_spec(const rfourier::QuadratureSpec& s) {
  return {s.abs_tol, s.rel_tol, s.max_subdivisions, s.upper_cutoff};
}

// Quadrature results are written even when the tolerance was missed.
template <class F>
sf_status transform(F&& body, double* value, double* error) {
  need(value, "value");
  try {
    const quadrature::Estimate e = body();
    *value = e.value;
    if (error)
      *error = e.error;
    return SF_OK;
  } catch (const QuadratureError& e) {
    *value = e.value;
    if (error)
      *error = e.error_estimate;
    return fail(SF_ERR_QUADRATURE, e.what());
  } catch (...) {
    return guarded([] { throw; });
  }
}

template <class F>
sf_status scalar(double* out, F&& f) {
  return guarded([&] {
    need(out, "out");
    *out = f();
  });
}

sf_model* new_model(ShellModel m) { return new sf_model{std::move(m)}; }

decomp::FitConfig to_config(const sf_fit_config* c) {
  decomp::FitConfig cfg;
  if (!c)
    return cfg;
  cfg.grid_step = c->grid_step;
  cfg.weight_mode = c->weight_mode == SF_WEIGHT_RADIAL ? decomp::WeightMode::radial
                                                       : decomp::WeightMode::uniform;
  cfg.max_iterations = c->max_iterations;
  cfg.gradient_tol = c->gradient_tol;
  cfg.residual_strategy.kind = c->strategy == SF_STRATEGY_ADD_UNTIL_ACCURACY
                                   ? decomp::ResidualStrategy::Kind::add_until_accuracy
                                   : decomp::ResidualStrategy::Kind::one_term_per_ripple;
  cfg.residual_strategy.accuracy = c->accuracy;
  cfg.residual_strategy.max_terms = c->max_terms;
  return cfg;
}

void fill_report(const decomp::FitReport& r, sf_fit_report* out) {
  if (!out)
    return;
  out->max_abs_error = r.max_abs_error;
  out->rms_error = r.rms_error;
  out->iterations = r.iterations;
  out->converged = r.converged ? 1 : 0;
  out->gradient_norm = r.gradient_norm;
  out->ripple_count = r.per_ripple_errors.size();
}

imaging::GridSpec to_grid(const sf_grid* g) {
  need(g, "grid");
  imaging::GridSpec spec;
  for (int a = 0; a < 3; ++a) {
    spec.origin[a] = g->origin[a];
    spec.spacing[a] = g->spacing[a];
    spec.dims[a] = g->dims[a];
  }
  return spec;
}

const imaging::GaussianAtomModel& find_type(const sf_atoms* atoms, const char* label) {
  need(atoms, "atoms");
  need(label, "type_label");
  const auto it = atoms->doc.types.find(label);
  if (it == atoms->doc.types.end())
    throw LookupError(std::string("no model for atom type: ") + label);
  return it->second;
}

// Type model with B_n = 0 and no extra blur; map synthesis adds both per atom.
ShellModel type_image(const imaging::GaussianAtomModel& type, double b_n, double d0, double nu0) {
  if (d0 > 0) {
    imaging::ResolutionSpec res{d0, nu0};
    res.validate();
    return imaging::atom_image_model(type, b_n, res, decomp::bundled_table("pi3"));
  }
  return imaging::unresolved_atom_model(type, b_n, nu0);
}

}  // namespace

extern "C" {

const char* sf_last_error(void) { return last_error.c_str(); }

const char* sf_status_name(sf_status status) {
  switch (status) {
    case SF_OK: return "ok";
    case SF_ERR_ARGUMENT: return "argument error";
    case SF_ERR_DOMAIN: return "domain error";
    case SF_ERR_RANGE: return "range error";
    case SF_ERR_QUADRATURE: return "quadrature error";
    case SF_ERR_LOOKUP: return "lookup error";
    case SF_ERR_FORMAT: return "format error";
    case SF_ERR_OPTIMIZATION: return "optimization error";
    case SF_ERR_IO: return "i/o error";
    case SF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sf_version(void) { return SHELLFIELD_VERSION; }

// ---- scalar functions ----

sf_status sf_gaussian(int dim, double x, double nu, double* out) {
  return scalar(out, [&] { return shells::gaussian_radial(dim, x, nu); });
}

sf_status sf_interference(int dim, double x, double* out) {
  return scalar(out, [&] { return shells::interference_radial(dim, x); });
}

sf_status sf_omega(int dim, double x, double mu, double nu, double* out) {
  return scalar(out, [&] { return shells::omega_radial(dim, x, mu, nu); });
}

sf_status sf_omega_gradient(int dim, double x, double mu, double nu, double* d_x, double* d_mu,
                            double* d_nu) {
  return guarded([&] {
    const auto g = shells::omega_gradient(dim, x, mu, nu);
    if (d_x)
      *d_x = g.d_x;
    if (d_mu)
      *d_mu = g.d_mu;
    if (d_nu)
      *d_nu = g.d_nu;
  });
}

sf_status sf_omega_fourier(int dim, double s, double mu, double nu, double* out) {
  return scalar(out, [&] { return shells::omega_fourier_radial(dim, s, mu, nu); });
}

sf_status sf_si_over_x(double x, double* out) {
  return scalar(out, [&] { return decomp::si_over_x(x); });
}

sf_status sf_sine_integral(double x, double* out) {
  return scalar(out, [&] { return specfun::sine_integral(x); });
}

sf_status sf_coulomb_resolution_image(double k, double d0, double x, double* out) {
  return scalar(out, [&] { return imaging::coulomb_resolution_image(k, d0, x); });
}

sf_status sf_coulomb_blurred(double k, double nu, double x, double* out) {
  return scalar(out, [&] { return imaging::coulomb_blurred(k, nu, x); });
}

sf_status sf_yukawa_ft(double k, double lambda, double s, double* out) {
  return scalar(out, [&] { return imaging::yukawa_ft(k, lambda, s); });
}

double sf_b_to_nu(double b) { return imaging::b_to_nu(b); }
double sf_nu_to_b(double nu) { return imaging::nu_to_b(nu); }

// ---- models ----

sf_status sf_model_create(int dim, size_t count, const double* kappa, const double* mu,
                          const double* nu, double x_max, const char* label, sf_model** out) {
  return guarded([&] {
    need(out, "out");
    if (count) {
      need(kappa, "kappa");
      need(mu, "mu");
      need(nu, "nu");
    }
    std::vector<ShellTerm> terms(count);
    for (size_t i = 0; i < count; ++i)
      terms[i] = {kappa[i], mu[i], nu[i]};
    *out = new_model(ShellModel(dim, std::move(terms), x_max, label ? label : ""));
  });
}

void sf_model_free(sf_model* model) { delete model; }
size_t sf_model_size(const sf_model* model) { return model ? model->model.size() : 0; }
int sf_model_dimension(const sf_model* model) { return model ? model->model.dimension() : 0; }
double sf_model_x_max(const sf_model* model) { return model ? model->model.x_max() : 0.0; }
const char* sf_model_label(const sf_model* model) { return model ? model->model.label().c_str() : ""; }

sf_status sf_model_term(const sf_model* model, size_t index, double* kappa, double* mu,
                        double* nu) {
  return guarded([&] {
    need(model, "model");
    if (index >= model->model.size())
      throw ArgumentError("term index out of range");
    const ShellTerm& t = model->model.terms()[index];
    if (kappa)
      *kappa = t.kappa;
    if (mu)
      *mu = t.mu;
    if (nu)
      *nu = t.nu;
  });
}

sf_status sf_model_eval(const sf_model* model, double x, size_t truncate_to, double* out) {
  return scalar(out, [&] {
    need(model, "model");
    std::optional<std::size_t> trunc;
    if (truncate_to)
      trunc = truncate_to;
    return shells::shell_sum_eval(model->model, x, trunc);
  });
}

sf_status sf_model_truncated(const sf_model* model, size_t count, sf_model** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = new_model(model->model.truncated(count));
  });
}

sf_status sf_model_convolve_gaussian(const sf_model* model, double nu0, sf_model** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = new_model(shells::convolve_with_gaussian(model->model, nu0));
  });
}

sf_status sf_model_rescale(const sf_model* model, double alpha, sf_model** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = new_model(shells::rescale(model->model, alpha));
  });
}

sf_status sf_model_apply_b_shift(const sf_model* model, double b, sf_model** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = new_model(imaging::apply_b_shift(model->model, b));
  });
}

size_t sf_table_count(void) { return decomp::bundled_table_names().size(); }

const char* sf_table_name(size_t index) {
  static const std::vector<std::string> names = decomp::bundled_table_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

sf_status sf_table_load(const char* name, sf_model** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = new_model(decomp::bundled_table(name));
  });
}

sf_status sf_table_max_error(const char* name, double* out) {
  return scalar(out, [&] {
    need(name, "name");
    return decomp::bundled_table_max_error(name);
  });
}

sf_status sf_table_write(const char* path, const sf_model* model, const char* source,
                         const double* max_abs_error) {
  return guarded([&] {
    need(path, "path");
    need(model, "model");
    io::TableDocument doc{model->model, {source ? source : "", std::nullopt}};
    if (max_abs_error)
      doc.meta.max_abs_error = *max_abs_error;
    io::write_file(path, io::format_table(doc));
  });
}

sf_status sf_table_read(const char* path, sf_model** out, char* source_out, size_t source_len,
                        double* max_abs_error, int* has_error) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    io::TableDocument doc = io::parse_table(io::read_file(path));
    if (source_out && source_len) {
      const std::size_t n = std::min(source_len - 1, doc.meta.source.size());
      std::memcpy(source_out, doc.meta.source.data(), n);
      source_out[n] = '\0';
    }
    if (has_error)
      *has_error = doc.meta.max_abs_error ? 1 : 0;
    if (max_abs_error && doc.meta.max_abs_error)
      *max_abs_error = *doc.meta.max_abs_error;
    *out = new_model(std::move(doc.model));
  });
}

// ---- profiles ----

sf_status sf_profile_create(int dim, double x0, double step, size_t count, const double* values,
                            sf_profile** out) {
  return guarded([&] {
    need(out, "out");
    need(values, "values");
    *out = new sf_profile{RadialProfile(dim, x0, step, std::vector<double>(values, values + count))};
  });
}

sf_status sf_profile_sample(int dim, sf_radial_fn f, void* user, double x0, double step,
                            size_t count, sf_profile** out) {
  return guarded([&] {
    need(out, "out");
    *out = new sf_profile{rfourier::sample_profile(wrap(f, user), x0, step, count, dim)};
  });
}

sf_status sf_profile_from_model(const sf_model* model, double x0, double step, size_t count,
                                sf_profile** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    const ShellModel& m = model->model;
    *out = new sf_profile{rfourier::sample_profile(
        [&m](double x) { return shells::shell_sum_eval(m, x); }, x0, step, count, m.dimension())};
  });
}

void sf_profile_free(sf_profile* profile) { delete profile; }
size_t sf_profile_size(const sf_profile* p) { return p ? p->profile.size() : 0; }
int sf_profile_dimension(const sf_profile* p) { return p ? p->profile.dimension() : 0; }
double sf_profile_x0(const sf_profile* p) { return p ? p->profile.x0() : 0.0; }
double sf_profile_step(const sf_profile* p) { return p ? p->profile.step() : 0.0; }
const double* sf_profile_values(const sf_profile* p) { return p ? p->profile.values().data() : nullptr; }

sf_status sf_profile_interpolate(const sf_profile* profile, double x, double* out) {
  return scalar(out, [&] {
    need(profile, "profile");
    return profile->profile.interpolate(x);
  });
}

sf_status sf_profile_write(const char* path, const sf_profile* profile) {
  return guarded([&] {
    need(path, "path");
    need(profile, "profile");
    io::write_file(path, io::format_profile(profile->profile));
  });
}

sf_status sf_profile_read(const char* path, int dim, sf_profile** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new sf_profile{io::parse_profile(io::read_file(path), dim)};
  });
}

// ---- transforms ----

sf_quadrature sf_quadrature_default(void) { return from_spec({}); }

sf_quadrature sf_quadrature_for_gaussian(double nu, double mu) {
  return from_spec(rfourier::QuadratureSpec::for_gaussian(nu, mu));
}

sf_status sf_radial_ft(int dim, sf_radial_fn f, void* user, double s, const sf_quadrature* q,
                       double* value, double* error) {
  return transform([&] { return rfourier::radial_ft(dim, wrap(f, user), s, to_spec(q)); }, value,
                   error);
}

sf_status sf_radial_ift_truncated(int dim, sf_radial_fn F, void* user, double x, double s_max,
                                  const sf_quadrature* q, double* value, double* error) {
  return transform(
      [&] { return rfourier::radial_ift_truncated(dim, wrap(F, user), x, s_max, to_spec(q)); },
      value, error);
}

sf_status sf_radial_convolve(int dim, sf_radial_fn f, void* f_user, sf_radial_fn g, void* g_user,
                             double x, const sf_quadrature* q, double* value, double* error) {
  return transform(
      [&] {
        return rfourier::radial_convolve(dim, wrap(f, f_user), wrap(g, g_user), x, to_spec(q));
      },
      value, error);
}

// ---- decomposition ----

sf_fit_config sf_fit_config_default(void) {
  const decomp::FitConfig d;
  sf_fit_config c{};
  c.grid_step = d.grid_step;
  c.weight_mode = SF_WEIGHT_UNIFORM;
  c.max_iterations = d.max_iterations;
  c.gradient_tol = d.gradient_tol;
  c.strategy = SF_STRATEGY_PER_RIPPLE;
  c.accuracy = d.residual_strategy.accuracy;
  c.max_terms = d.residual_strategy.max_terms;
  return c;
}

sf_status sf_detect_ripples(const sf_profile* target, size_t* count) {
  return guarded([&] {
    need(target, "target");
    need(count, "count");
    *count = decomp::detect_ripples(target->profile).size();
  });
}

sf_status sf_decompose(const sf_profile* target, const sf_fit_config* config, sf_model** out,
                       sf_fit_report* report) {
  try {
    need(target, "target");
    need(out, "out");
  } catch (...) {
    return guarded([] { throw; });
  }
  try {
    decomp::FitResult r = decomp::decompose(target->profile.dimension(), target->profile,
                                            to_config(config));
    fill_report(r.report, report);
    *out = new_model(std::move(r.model));
    return SF_OK;
  } catch (decomp::OptimizationError& e) {
    fill_report(e.best.report, report);
    *out = new_model(std::move(e.best.model));
    return fail(SF_ERR_OPTIMIZATION, e.what());
  } catch (...) {
    return guarded([] { throw; });
  }
}

sf_status sf_evaluate_fit(const sf_model* model, const sf_profile* target, sf_fit_report* report) {
  return guarded([&] {
    need(model, "model");
    need(target, "target");
    need(report, "report");
    fill_report(decomp::evaluate_fit(model->model, target->profile), report);
  });
}

// ---- atoms, images, maps ----

namespace {
sf_atoms* new_atoms(io::AtomModelDocument doc) {
  std::string missing;
  for (const auto& m : doc.missing_types())
    missing += (missing.empty() ? "" : ", ") + m;
  return new sf_atoms{std::move(doc), std::move(missing)};
}
}  // namespace

sf_status sf_atoms_read(const char* path, sf_atoms** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new_atoms(io::parse_atom_model(io::read_file(path)));
  });
}

sf_status sf_atoms_parse(const char* text, sf_atoms** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new_atoms(io::parse_atom_model(text));
  });
}

void sf_atoms_free(sf_atoms* atoms) { delete atoms; }
size_t sf_atoms_size(const sf_atoms* atoms) { return atoms ? atoms->doc.atoms.size() : 0; }
const char* sf_atoms_missing_types(const sf_atoms* atoms) { return atoms ? atoms->missing.c_str() : ""; }

sf_status sf_atoms_site(const sf_atoms* atoms, size_t index, double position[3], double* b_factor,
                        double* occupancy, const char** type_label) {
  return guarded([&] {
    need(atoms, "atoms");
    if (index >= atoms->doc.atoms.size())
      throw ArgumentError("atom index out of range");
    const imaging::AtomSite& a = atoms->doc.atoms[index];
    if (position)
      for (int i = 0; i < 3; ++i)
        position[i] = a.position[i];
    if (b_factor)
      *b_factor = a.b_factor;
    if (occupancy)
      *occupancy = a.occupancy;
    if (type_label)
      *type_label = a.type_label.c_str();
  });
}

sf_status sf_atom_image_model(const sf_atoms* atoms, const char* type_label, double b_n, double d0,
                              double nu0, sf_model** out) {
  return guarded([&] {
    need(out, "out");
    *out = new_model(type_image(find_type(atoms, type_label), b_n, d0, nu0));
  });
}

sf_status sf_gaussian_image_model(double a, double nu, double d0, double nu0, sf_model** out) {
  return guarded([&] {
    need(out, "out");
    imaging::ResolutionSpec res{d0, nu0};
    res.validate();
    *out = new_model(imaging::gaussian_image_model(a, nu, res, decomp::bundled_table("pi3")));
  });
}

sf_status sf_synthesize_map(const sf_atoms* atoms, double d0, double nu0, const sf_grid* grid,
                            unsigned threads, sf_volume** out) {
  return guarded([&] {
    need(atoms, "atoms");
    need(out, "out");
    const imaging::GridSpec spec = to_grid(grid);
    if (!atoms->missing.empty())
      throw LookupError("no model for atom type(s): " + atoms->missing);
    std::map<std::string, ShellModel> models;
    imaging::ResolutionSpec res{d0 > 0 ? d0 : 1.0, nu0};
    if (d0 > 0) {
      for (const auto& [label, type] : atoms->doc.types)
        models.emplace(label, type_image(type, 0.0, d0, 0.0));
    } else {
      // Unresolved terms may be delta functions until B_n or nu0 widens
      // them, so the blur is built into the type model here.
      for (const auto& [label, type] : atoms->doc.types)
        models.emplace(label, type_image(type, 0.0, 0.0, nu0));
      res.nu0 = 0.0;
    }
    imaging::SynthesisOptions opts;
    opts.threads = threads;
    imaging::SynthesisResult r = imaging::synthesize_map(atoms->doc.atoms, models, res, spec, opts);
    *out = new sf_volume{std::move(r.volume), std::move(r.warnings)};
  });
}

void sf_volume_free(sf_volume* volume) { delete volume; }

sf_grid sf_volume_grid(const sf_volume* volume) {
  sf_grid g{};
  if (!volume)
    return g;
  const auto& s = volume->volume.spec();
  for (int a = 0; a < 3; ++a) {
    g.origin[a] = s.origin[a];
    g.spacing[a] = s.spacing[a];
    g.dims[a] = s.dims[a];
  }
  return g;
}

const double* sf_volume_values(const sf_volume* v) { return v ? v->volume.values().data() : nullptr; }
size_t sf_volume_voxel_count(const sf_volume* v) { return v ? v->volume.values().size() : 0; }
size_t sf_volume_warning_count(const sf_volume* v) { return v ? v->warnings.size() : 0; }

const char* sf_volume_warning(const sf_volume* v, size_t index) {
  return v && index < v->warnings.size() ? v->warnings[index].c_str() : nullptr;
}

sf_status sf_volume_write_mrc(const char* path, const sf_volume* volume) {
  return guarded([&] {
    need(path, "path");
    need(volume, "volume");
    io::write_file(path, io::format_mrc(volume->volume));
  });
}

sf_status sf_volume_write_raw(const char* path, const char* meta_path, const sf_volume* volume) {
  return guarded([&] {
    need(path, "path");
    need(meta_path, "meta_path");
    need(volume, "volume");
    io::write_file(path, io::format_raw(volume->volume));
    io::write_file(meta_path, io::format_raw_meta(volume->volume));
  });
}

sf_status sf_volume_read_raw(const char* path, const char* meta_path, sf_volume** out) {
  return guarded([&] {
    need(path, "path");
    need(meta_path, "meta_path");
    need(out, "out");
    *out = new sf_volume{io::parse_raw(io::read_file(path), io::read_file(meta_path)), {}};
  });
}

// ---- provenance ----

sf_status sf_sha256_file(const char* path, char hex[65]) {
  return guarded([&] {
    need(path, "path");
    need(hex, "hex");
    const std::string digest = io::sha256_hex(io::read_file(path));
    std::memcpy(hex, digest.c_str(), 65);
  });
}

sf_status sf_write_manifest(const char* path, int argc, const char* const* argv,
                            size_t input_count, const char* const* inputs, size_t output_count,
                            const char* const* outputs, double wall_seconds) {
  return guarded([&] {
    need(path, "path");
    io::RunManifest m;
    for (int i = 0; i < argc; ++i)
      m.command_line.emplace_back(argv[i]);
    for (size_t i = 0; i < input_count; ++i)
      m.input_digests.emplace_back(inputs[i], io::sha256_hex(io::read_file(inputs[i])));
    for (size_t i = 0; i < output_count; ++i)
      m.outputs.emplace_back(outputs[i]);
    m.tool_version = SHELLFIELD_VERSION;
    m.wall_seconds = wall_seconds;
    io::write_file(path, io::format_manifest(m));
  });
}

}  // extern "C"
