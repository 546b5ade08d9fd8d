// Command-line front end. Links only the C API.
//
// Exit codes: 0 success, 2 usage or input error, 3 fit did not converge,
// 4 oracle tolerance exceeded, 1 unexpected internal failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shellfield.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitOracle = 4;

constexpr double kPi = 3.141592653589793238462643383279502884;

using Clock = std::chrono::steady_clock;

// Failure raised from C API status codes.
struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(sf_status s) {
  switch (s) {
    case SF_OK: return kExitOk;
    case SF_ERR_OPTIMIZATION: return kExitNotConverged;
    case SF_ERR_INTERNAL: return kExitInternal;
    default: return kExitInput;
  }
}

void check(sf_status s, const std::string& context = "") {
  if (s != SF_OK)
    throw Failure{exit_code_for(s), (context.empty() ? "" : context + ": ") + sf_last_error()};
}

// Owning wrappers for the C handles.
template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() {
    Free(p);
    p = nullptr;
    return &p;
  }
  T* get() const { return p; }
};
using Model = Handle<sf_model, sf_model_free>;
using Profile = Handle<sf_profile, sf_profile_free>;
using Atoms = Handle<sf_atoms, sf_atoms_free>;
using Volume = Handle<sf_volume, sf_volume_free>;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct Context {
  int argc;
  char** argv;
  Clock::time_point start;
};

void write_manifest(const Context& ctx, const std::string& artifact,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  std::vector<const char*> in, out;
  for (const auto& s : inputs)
    in.push_back(s.c_str());
  for (const auto& s : outputs)
    out.push_back(s.c_str());
  const double wall = std::chrono::duration<double>(Clock::now() - ctx.start).count();
  const std::string path = artifact + ".manifest.json";
  check(sf_write_manifest(path.c_str(), ctx.argc, ctx.argv, in.size(), in.data(), out.size(),
                          out.data(), wall),
        "writing " + path);
}

// x grid shared by commands producing radial profiles
struct GridFlags {
  double x0 = 0.0;
  double xmax = 10.0;
  double step = 0.0;

  void add(CLI::App* cmd, double default_xmax) {
    xmax = default_xmax;
    cmd->add_option("--x0", x0, "first sample")->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd->add_option("--xmax", xmax, "last sample")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--step", step, "sample spacing (default xmax/4000)")->check(CLI::PositiveNumber);
  }
  double spacing() const { return step > 0 ? step : (xmax - x0) / 4000.0; }
  std::size_t count() const {
    if (!(xmax > x0))
      throw Failure{kExitInput, "--xmax must exceed --x0"};
    return static_cast<std::size_t>(std::llround((xmax - x0) / spacing())) + 1;
  }
};

void print_profile(const sf_profile* p) {
  std::fputs("# x f\n", stdout);
  const double* v = sf_profile_values(p);
  for (std::size_t i = 0; i < sf_profile_size(p); ++i)
    std::printf("%s %s\n", num(sf_profile_x0(p) + sf_profile_step(p) * double(i)).c_str(),
                num(v[i]).c_str());
}

void emit_profile(const Context& ctx, const sf_profile* p, const std::string& output,
                  const std::vector<std::string>& inputs) {
  if (output.empty()) {
    print_profile(p);
    return;
  }
  check(sf_profile_write(output.c_str(), p), "writing " + output);
  write_manifest(ctx, output, inputs, {output});
}

// Bundled table name or path to a table document.
void load_model(const std::string& spec, Model& model, std::vector<std::string>& inputs) {
  if (sf_table_load(spec.c_str(), model.out()) == SF_OK)
    return;
  if (!std::filesystem::exists(spec))
    throw Failure{kExitInput, "--table: '" + spec + "' is neither a bundled table nor a file"};
  check(sf_table_read(spec.c_str(), model.out(), nullptr, 0, nullptr, nullptr), "--table");
  inputs.push_back(spec);
}

// ---- eval ----

struct EvalArgs {
  std::string function;
  int dim = 3;
  double mu = 0.0;
  std::optional<double> nu;
  std::optional<double> k;
  std::optional<double> d0;
  std::string table;
  std::size_t trunc = 0;
  std::optional<double> x;
  GridFlags grid;
  std::string output;
};

void add_eval(CLI::App& app, EvalArgs& a) {
  auto* cmd = app.add_subcommand("eval", "evaluate a radial function on a grid or at one point");
  cmd->add_option("function", a.function, "omega, pi, gauss, shell_sum, coulomb_image, si_over_x")
      ->required()
      ->check(CLI::IsMember({"omega", "pi", "gauss", "shell_sum", "coulomb_image", "si_over_x"}));
  cmd->add_option("--dim", a.dim, "space dimension")->check(CLI::Range(1, 3))->capture_default_str();
  cmd->add_option("--mu", a.mu, "shell radius")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--nu", a.nu, "Gaussian width parameter")->check(CLI::PositiveNumber);
  cmd->add_option("--K", a.k, "charge coefficient");
  cmd->add_option("--d0", a.d0, "resolution")->check(CLI::PositiveNumber);
  cmd->add_option("--table", a.table, "bundled table name or table file (shell_sum)");
  cmd->add_option("--trunc", a.trunc, "use only the first terms (shell_sum)")->check(CLI::PositiveNumber);
  cmd->add_option("--x", a.x, "print the value at a single point")->check(CLI::NonNegativeNumber);
  a.grid.add(cmd, 10.0);
  cmd->add_option("--output", a.output, "profile file (stdout if absent)");
}

int run_eval(const Context& ctx, const EvalArgs& a) {
  auto require = [](bool ok, const char* flag, const std::string& fn) {
    if (!ok)
      throw Failure{kExitInput, std::string(flag) + " is required for " + fn};
  };
  std::vector<std::string> inputs;
  Model model;
  std::function<double(double)> f;
  int dim = a.dim;
  const std::string& fn = a.function;
  if (fn == "omega") {
    require(a.nu.has_value(), "--nu", fn);
    f = [&](double x) {
      double v;
      check(sf_omega(a.dim, x, a.mu, *a.nu, &v));
      return v;
    };
  } else if (fn == "pi") {
    f = [&](double x) {
      double v;
      check(sf_interference(a.dim, x, &v));
      return v;
    };
  } else if (fn == "gauss") {
    require(a.nu.has_value(), "--nu", fn);
    f = [&](double x) {
      double v;
      check(sf_gaussian(a.dim, x, *a.nu, &v));
      return v;
    };
  } else if (fn == "shell_sum") {
    require(!a.table.empty(), "--table", fn);
    load_model(a.table, model, inputs);
    if (a.trunc > sf_model_size(model.get()))
      throw Failure{kExitInput, "--trunc exceeds the number of terms (" +
                                    std::to_string(sf_model_size(model.get())) + ")"};
    dim = sf_model_dimension(model.get());
    f = [&](double x) {
      double v;
      check(sf_model_eval(model.get(), x, a.trunc, &v));
      return v;
    };
  } else if (fn == "coulomb_image") {
    require(a.k.has_value(), "--K", fn);
    require(a.d0.has_value(), "--d0", fn);
    dim = 3;
    f = [&](double x) {
      double v;
      check(sf_coulomb_resolution_image(*a.k, *a.d0, x, &v));
      return v;
    };
  } else {
    dim = 3;
    f = [&](double x) {
      double v;
      check(sf_si_over_x(x, &v));
      return v;
    };
  }

  if (a.x) {
    std::printf("%s\n", num(f(*a.x)).c_str());
    return kExitOk;
  }
  const std::size_t n = a.grid.count();
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i)
    values[i] = f(a.grid.x0 + a.grid.spacing() * double(i));
  Profile p;
  check(sf_profile_create(dim, a.grid.x0, a.grid.spacing(), n, values.data(), p.out()));
  emit_profile(ctx, p.get(), a.output, inputs);
  return kExitOk;
}

// ---- decompose ----

struct DecomposeArgs {
  std::string target;
  int dim = 3;
  std::optional<double> xmax;
  double step = 0.0;
  std::string strategy = "per-ripple";
  std::optional<double> accuracy;
  int max_iterations = 0;
  std::size_t max_terms = 0;
  std::string weight = "uniform";
  std::string output;
  CLI::Option* strategy_option = nullptr;
};

void add_decompose(CLI::App& app, DecomposeArgs& a) {
  auto* cmd = app.add_subcommand("decompose", "fit a shell series to a radial function");
  cmd->add_option("--target", a.target,
                  "pi1, pi2, pi3, si_over_x, coulomb_erf:NU or file:PATH")
      ->required();
  cmd->add_option("--dim", a.dim, "dimension of a file target")->check(CLI::Range(1, 3))->capture_default_str();
  cmd->add_option("--xmax", a.xmax, "fit range (default 20 for pi3, 10 otherwise)")->check(CLI::PositiveNumber);
  cmd->add_option("--step", a.step, "sample spacing (default xmax/4000)")->check(CLI::PositiveNumber);
  a.strategy_option = cmd->add_option("--strategy", a.strategy, "per-ripple or add-until-accuracy");
  a.strategy_option->check(CLI::IsMember({"per-ripple", "add-until-accuracy"}));
  cmd->add_option("--accuracy", a.accuracy,
                  "target max abs error; alone it selects add-until-accuracy (default 1e-3)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iterations", a.max_iterations, "L-BFGS iterations per refinement")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-terms", a.max_terms, "term budget for add-until-accuracy")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--weight", a.weight, "uniform or radial")->check(CLI::IsMember({"uniform", "radial"}));
  cmd->add_option("--output", a.output, "table file")->required();
}

// coulomb_erf:NU or coulomb_erf(NU)
std::optional<double> coulomb_erf_width(const std::string& t) {
  std::string rest;
  if (t.rfind("coulomb_erf:", 0) == 0)
    rest = t.substr(12);
  else if (t.rfind("coulomb_erf(", 0) == 0 && t.back() == ')')
    rest = t.substr(12, t.size() - 13);
  else
    return std::nullopt;
  char* end = nullptr;
  const double nu = std::strtod(rest.c_str(), &end);
  if (rest.empty() || *end != '\0' || !(nu > 0))
    throw Failure{kExitInput, "--target: coulomb_erf needs a positive width, got '" + rest + "'"};
  return nu;
}

double pi_fn(double x, void* dim) {
  double v = NAN;
  sf_interference(*static_cast<int*>(dim), x, &v);
  return v;
}

double si_fn(double x, void*) {
  double v = NAN;
  sf_si_over_x(x, &v);
  return v;
}

double coulomb_erf_fn(double x, void* nu) {
  double v = NAN;
  sf_coulomb_blurred(1.0, *static_cast<double*>(nu), x, &v);
  return v;
}

int run_decompose(const Context& ctx, DecomposeArgs a) {
  std::vector<std::string> inputs;
  Profile target;
  static int dims[] = {1, 2, 3};
  if (a.target.rfind("file:", 0) == 0) {
    const std::string path = a.target.substr(5);
    check(sf_profile_read(path.c_str(), a.dim, target.out()), "--target");
    inputs.push_back(path);
  } else {
    const double xmax = a.xmax.value_or(a.target == "pi3" ? 20.0 : 10.0);
    const double step = a.step > 0 ? a.step : xmax / 4000.0;
    const std::size_t n = static_cast<std::size_t>(std::llround(xmax / step)) + 1;
    static double nu = 0.0;
    if (a.target == "pi1" || a.target == "pi2" || a.target == "pi3") {
      int* dim = &dims[a.target[2] - '1'];
      check(sf_profile_sample(*dim, pi_fn, dim, 0.0, step, n, target.out()));
    } else if (a.target == "si_over_x") {
      check(sf_profile_sample(3, si_fn, nullptr, 0.0, step, n, target.out()));
    } else if (auto w = coulomb_erf_width(a.target)) {
      nu = *w;
      check(sf_profile_sample(3, coulomb_erf_fn, &nu, 0.0, step, n, target.out()));
    } else {
      throw Failure{kExitInput, "--target: unknown target '" + a.target + "'"};
    }
  }

  sf_fit_config cfg = sf_fit_config_default();
  const bool grow = a.strategy == "add-until-accuracy" ||
                    (a.accuracy && a.strategy_option->count() == 0);
  const double accuracy = a.accuracy.value_or(1e-3);
  if (grow) {
    cfg.strategy = SF_STRATEGY_ADD_UNTIL_ACCURACY;
    cfg.accuracy = accuracy;
  }
  if (a.max_iterations > 0)
    cfg.max_iterations = a.max_iterations;
  if (a.max_terms > 0)
    cfg.max_terms = a.max_terms;
  cfg.weight_mode = a.weight == "radial" ? SF_WEIGHT_RADIAL : SF_WEIGHT_UNIFORM;

  Model model;
  sf_fit_report report{};
  const sf_status status = sf_decompose(target.get(), &cfg, model.out(), &report);
  if (status != SF_OK && status != SF_ERR_OPTIMIZATION)
    check(status, "decompose");
  // The optimizer rarely meets its gradient test on oscillatory targets
  // before the iteration cap, so reaching the accuracy target also counts.
  const bool converged =
      status == SF_OK && (report.converged || report.max_abs_error <= accuracy);

  check(sf_table_write(a.output.c_str(), model.get(), "fit", &report.max_abs_error),
        "writing " + a.output);
  write_manifest(ctx, a.output, inputs, {a.output});

  std::printf("terms %zu\n", sf_model_size(model.get()));
  std::printf("max_abs_error %s\n", num(report.max_abs_error).c_str());
  std::printf("rms_error %s\n", num(report.rms_error).c_str());
  std::printf("iterations %d\n", report.iterations);
  std::printf("converged %s\n", converged ? "true" : "false");
  if (status == SF_ERR_OPTIMIZATION)
    std::fprintf(stderr, "shellfield: %s; best model written\n", sf_last_error());
  else if (!converged)
    std::fprintf(stderr, "shellfield: max error %s above the %s target; best model written\n",
                 short_num(report.max_abs_error).c_str(), short_num(accuracy).c_str());
  return converged ? kExitOk : kExitNotConverged;
}

// ---- image ----

struct ImageArgs {
  std::string model_path;
  std::optional<double> d0;
  double nu0 = 0.0;
  bool radial = false;
  bool map = false;
  std::string type;
  std::optional<double> b;
  GridFlags grid;
  std::vector<double> origin{0.0, 0.0, 0.0};
  std::vector<double> spacing;
  std::vector<std::size_t> dims;
  std::string format = "mrc";
  std::string output;
};

void add_image(CLI::App& app, ImageArgs& a) {
  auto* cmd = app.add_subcommand("image", "image an atomic model at limited resolution");
  cmd->add_option("--model", a.model_path, "atomic model document")->required();
  cmd->add_option("--d0", a.d0, "resolution; absent means no resolution cut")->check(CLI::PositiveNumber);
  cmd->add_option("--nu0", a.nu0, "extra Gaussian blur")->check(CLI::NonNegativeNumber)->capture_default_str();
  auto* radial = cmd->add_flag("--radial", a.radial, "radial profile of one atom type");
  auto* map = cmd->add_flag("--map", a.map, "3-D map of all atoms");
  radial->excludes(map);
  cmd->add_option("--type", a.type, "atom type for --radial (default: type of the first atom)");
  cmd->add_option("--b", a.b, "displacement B for --radial (default: B of the first atom of that type)")
      ->check(CLI::NonNegativeNumber);
  a.grid.add(cmd, 10.0);
  cmd->add_option("--origin", a.origin, "map origin x,y,z")->delimiter(',')->expected(3);
  cmd->add_option("--spacing", a.spacing, "voxel spacing s or sx,sy,sz")->delimiter(',')->expected(1, 3);
  cmd->add_option("--dims", a.dims, "voxel counts nx,ny,nz")->delimiter(',')->expected(3);
  cmd->add_option("--format", a.format, "mrc or raw")->check(CLI::IsMember({"mrc", "raw"}))->capture_default_str();
  cmd->add_option("--output", a.output, "output file (radial: stdout if absent)");
}

unsigned thread_limit() {
  const char* env = std::getenv("SHELLFIELD_THREADS");
  if (!env || !*env)
    return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1)
    throw Failure{kExitInput, "SHELLFIELD_THREADS must be a positive integer"};
  return static_cast<unsigned>(n);
}

int run_image(const Context& ctx, const ImageArgs& a) {
  if (a.radial == a.map)
    throw Failure{kExitInput, "exactly one of --radial and --map is required"};
  Atoms atoms;
  check(sf_atoms_read(a.model_path.c_str(), atoms.out()), "--model");
  const double d0 = a.d0.value_or(0.0);

  if (a.radial) {
    std::string type = a.type;
    double b = 0.0;
    bool found = false;
    for (std::size_t i = 0; i < sf_atoms_size(atoms.get()); ++i) {
      double pos[3], bf, occ;
      const char* label;
      check(sf_atoms_site(atoms.get(), i, pos, &bf, &occ, &label));
      if (type.empty())
        type = label;
      if (type == label) {
        b = bf;
        found = true;
        break;
      }
    }
    if (type.empty())
      throw Failure{kExitInput, "--model: no atoms and no --type given"};
    if (!found && !a.b && a.type.empty())
      throw Failure{kExitInput, "--type: no atom of type '" + type + "'"};
    Model model;
    const sf_status s = sf_atom_image_model(atoms.get(), type.c_str(), a.b.value_or(b), d0, a.nu0,
                                            model.out());
    if (s == SF_ERR_LOOKUP)
      throw Failure{kExitInput, "--model: missing atom types: " + type};
    check(s, "image");
    Profile p;
    check(sf_profile_from_model(model.get(), a.grid.x0, a.grid.spacing(), a.grid.count(), p.out()));
    emit_profile(ctx, p.get(), a.output, {a.model_path});
    return kExitOk;
  }

  const std::string missing = sf_atoms_missing_types(atoms.get());
  if (!missing.empty())
    throw Failure{kExitInput, "--model: missing atom types: " + missing};
  if (a.dims.size() != 3 || a.spacing.empty())
    throw Failure{kExitInput, "--map needs --dims and --spacing"};
  if (a.output.empty())
    throw Failure{kExitInput, "--map needs --output"};
  sf_grid grid{};
  for (int i = 0; i < 3; ++i) {
    grid.origin[i] = a.origin[i];
    grid.spacing[i] = a.spacing.size() == 3 ? a.spacing[i] : a.spacing[0];
    grid.dims[i] = a.dims[i];
  }
  Volume volume;
  check(sf_synthesize_map(atoms.get(), d0, a.nu0, &grid, thread_limit(), volume.out()), "--map");
  for (std::size_t i = 0; i < sf_volume_warning_count(volume.get()); ++i)
    std::fprintf(stderr, "shellfield: warning: %s\n", sf_volume_warning(volume.get(), i));

  std::vector<std::string> outputs{a.output};
  if (a.format == "mrc") {
    check(sf_volume_write_mrc(a.output.c_str(), volume.get()), "writing " + a.output);
  } else {
    const std::string meta = a.output + ".json";
    check(sf_volume_write_raw(a.output.c_str(), meta.c_str(), volume.get()), "writing " + a.output);
    outputs.push_back(meta);
  }
  write_manifest(ctx, a.output, {a.model_path}, outputs);
  return kExitOk;
}

// ---- oracle ----

struct OracleArgs {
  std::string check_name;
  int dim = 3;
  double mu = 0.0;
  double nu = 0.1;
  double nu0 = 0.0;
  std::vector<double> s{0.0, 0.1, 0.5, 1.0, 3.0};
  std::vector<double> x;
  double a = 1.0;
  double d0 = 1.0;
  std::string name;
  std::size_t trunc = 0;
  std::optional<double> xmax;
  std::optional<double> step;
  std::optional<double> tol;
  std::string output;
};

void add_oracle(CLI::App& app, OracleArgs& a) {
  auto* cmd = app.add_subcommand("oracle", "compare a fast route against an independent computation");
  cmd->add_option("check", a.check_name, "ft, conv, image or table")
      ->required()
      ->check(CLI::IsMember({"ft", "conv", "image", "table"}));
  cmd->add_option("--dim", a.dim, "space dimension")->check(CLI::Range(1, 3))->capture_default_str();
  cmd->add_option("--mu", a.mu, "shell radius")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--nu", a.nu, "width parameter")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--nu0", a.nu0, "blur width (conv, image)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--s", a.s, "frequencies (ft)")->delimiter(',');
  cmd->add_option("--x", a.x, "points (conv; default 0,1,mu,mu+1)")->delimiter(',');
  cmd->add_option("--a", a.a, "amplitude (image)")->capture_default_str();
  cmd->add_option("--d0", a.d0, "resolution (image)")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--name", a.name, "bundled table (table)");
  cmd->add_option("--trunc", a.trunc, "use the first rows only (table)")->check(CLI::PositiveNumber);
  cmd->add_option("--xmax", a.xmax, "range (image, table)")->check(CLI::PositiveNumber);
  cmd->add_option("--step", a.step, "spacing (image, table)")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", a.tol, "tolerance (image: fraction of the peak)")->check(CLI::PositiveNumber);
  cmd->add_option("--output", a.output, "discrepancy profile file (table; stdout if absent)");
}

struct Worst {
  double diff = -1.0;
  double at = 0.0;
  void add(double d, double where) {
    if (std::abs(d) > diff) {
      diff = std::abs(d);
      at = where;
    }
  }
};

int verdict(const std::string& what, const Worst& w, const char* coordinate, double tol) {
  const bool ok = w.diff <= tol;
  std::printf("# %s max_abs_diff %s at %s=%s tol %s %s\n", what.c_str(), short_num(w.diff).c_str(),
              coordinate, num(w.at).c_str(), short_num(tol).c_str(), ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitOracle;
}

struct ShellParams {
  int dim;
  double mu, nu;
};

double omega_fn(double x, void* p) {
  const auto* s = static_cast<ShellParams*>(p);
  double v = NAN;
  sf_omega(s->dim, x, s->mu, s->nu, &v);
  return v;
}

double gauss_fn(double x, void* p) {
  const auto* s = static_cast<ShellParams*>(p);
  double v = NAN;
  sf_gaussian(s->dim, x, s->nu, &v);
  return v;
}

// a exp(-2 pi^2 nu s^2)
double gauss_ft_fn(double s, void* p) {
  const auto* g = static_cast<ShellParams*>(p);
  return g->mu * std::exp(-2.0 * kPi * kPi * g->nu * s * s);
}

int run_oracle(const Context& ctx, const OracleArgs& a) {
  if (a.check_name == "ft") {
    ShellParams p{a.dim, a.mu, a.nu};
    const sf_quadrature q = sf_quadrature_for_gaussian(a.nu, a.mu);
    Worst w;
    for (double s : a.s) {
      double direct = 0.0, closed = 0.0;
      check(sf_radial_ft(a.dim, omega_fn, &p, s, &q, &direct, nullptr), "--s");
      check(sf_omega_fourier(a.dim, s, a.mu, a.nu, &closed));
      std::printf("%s %s\n", num(s).c_str(), num(direct - closed).c_str());
      w.add(direct - closed, s);
    }
    return verdict("ft", w, "s", a.tol.value_or(1e-6));
  }

  if (a.check_name == "conv") {
    if (a.dim == 2)
      throw Failure{kExitInput, "--dim: direct-space convolution supports 1 and 3"};
    ShellParams shell{a.dim, a.mu, a.nu}, blur{a.dim, 0.0, a.nu0 > 0 ? a.nu0 : 0.03};
    sf_quadrature q = sf_quadrature_default();
    q.upper_cutoff = a.mu + 12.0 * std::sqrt(a.nu + blur.nu) + 1.0;
    std::vector<double> xs = a.x;
    if (xs.empty())
      xs = {0.0, 1.0, a.mu, a.mu + 1.0};
    Worst w;
    for (double x : xs) {
      double direct = 0.0, closed = 0.0;
      check(sf_radial_convolve(a.dim, omega_fn, &shell, gauss_fn, &blur, x, &q, &direct, nullptr), "--x");
      check(sf_omega(a.dim, x, a.mu, a.nu + blur.nu, &closed));
      std::printf("%s %s\n", num(x).c_str(), num(direct - closed).c_str());
      w.add(direct - closed, x);
    }
    return verdict("conv", w, "x", a.tol.value_or(1e-6));
  }

  if (a.check_name == "image") {
    Model model;
    check(sf_gaussian_image_model(a.a, a.nu, a.d0, a.nu0, model.out()), "image");
    ShellParams ft{3, a.a, a.nu + a.nu0};
    const double xmax = a.xmax.value_or(10.0);
    const double step = a.step.value_or(0.05);
    const auto n = static_cast<std::size_t>(std::llround(xmax / step)) + 1;
    Worst w;
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = step * double(i);
      double series = 0.0, direct = 0.0;
      check(sf_model_eval(model.get(), x, 0, &series));
      check(sf_radial_ift_truncated(3, gauss_ft_fn, &ft, x, 1.0 / a.d0, nullptr, &direct, nullptr));
      peak = std::max(peak, std::abs(direct));
      std::printf("%s %s\n", num(x).c_str(), num(series - direct).c_str());
      w.add(series - direct, x);
    }
    std::printf("# peak %s\n", num(peak).c_str());
    return verdict("image", w, "x", a.tol.value_or(1.5e-3) * peak);
  }

  // table
  if (a.name.empty())
    throw Failure{kExitInput, "--name is required for the table check"};
  Model model;
  check(sf_table_load(a.name.c_str(), model.out()), "--name");
  const std::string label = sf_model_label(model.get());
  if (a.trunc > sf_model_size(model.get()))
    throw Failure{kExitInput, "--trunc exceeds the number of rows (" +
                                  std::to_string(sf_model_size(model.get())) + ")"};
  double published = 0.0;
  check(sf_table_max_error(a.name.c_str(), &published));
  int dim = sf_model_dimension(model.get());
  const bool si = label.rfind("si_over_x", 0) == 0;
  const double xmax = a.xmax.value_or(sf_model_x_max(model.get()));
  const double step = a.step.value_or(0.0025);
  const auto n = static_cast<std::size_t>(std::llround(xmax / step)) + 1;
  std::vector<double> diff(n);
  Worst w;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = step * double(i);
    double series = 0.0;
    check(sf_model_eval(model.get(), x, a.trunc, &series));
    const double exact = si ? si_fn(x, nullptr) : pi_fn(x, &dim);
    diff[i] = series - exact;
    w.add(diff[i], x);
  }
  // 25% slack on the published maximum for the full table, twice that for a truncation
  const double tol = a.tol.value_or(a.trunc ? 2.0 * published : 1.25 * published);
  Profile p;
  check(sf_profile_create(dim, 0.0, step, n, diff.data(), p.out()));
  if (a.output.empty()) {
    print_profile(p.get());
  } else {
    check(sf_profile_write(a.output.c_str(), p.get()), "writing " + a.output);
    write_manifest(ctx, a.output, {}, {a.output});
  }
  return verdict("table " + label + (a.trunc ? " first " + std::to_string(a.trunc) : ""), w, "x", tol);
}

// ---- tables ----

struct TablesArgs {
  std::string name;
  bool all = false;
  std::string output = ".";
};

void add_tables(CLI::App& app, TablesArgs& a) {
  auto* cmd = app.add_subcommand("tables", "write the bundled coefficient tables");
  auto* name = cmd->add_option("name", a.name, "table name");
  auto* all = cmd->add_flag("--all", a.all, "every bundled table");
  name->excludes(all);
  cmd->add_option("--output", a.output, "output directory")->capture_default_str();
}

int run_tables(const Context& ctx, const TablesArgs& a) {
  std::vector<std::string> names;
  if (a.all) {
    for (std::size_t i = 0; i < sf_table_count(); ++i)
      names.emplace_back(sf_table_name(i));
  } else if (!a.name.empty()) {
    names.push_back(a.name);
  } else {
    throw Failure{kExitInput, "give a table name or --all"};
  }
  std::error_code ec;
  std::filesystem::create_directories(a.output, ec);
  if (ec)
    throw Failure{kExitInput, "--output: cannot create '" + a.output + "': " + ec.message()};
  for (const auto& n : names) {
    Model model;
    check(sf_table_load(n.c_str(), model.out()), "name");
    double err = 0.0;
    check(sf_table_max_error(n.c_str(), &err));
    const std::string path =
        (std::filesystem::path(a.output) / (std::string(sf_model_label(model.get())) + ".json")).string();
    check(sf_table_write(path.c_str(), model.get(), "published", &err), "writing " + path);
    write_manifest(ctx, path, {}, {path});
    std::printf("%s\n", path.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  const Context ctx{argc, argv, Clock::now()};
  CLI::App app{"Shell-function decomposition of radial fields and resolution-limited images"};
  app.set_version_flag("--version", std::string(sf_version()));
  app.require_subcommand(1);

  EvalArgs eval;
  DecomposeArgs decompose;
  ImageArgs image;
  OracleArgs oracle;
  TablesArgs tables;
  add_eval(app, eval);
  add_decompose(app, decompose);
  add_image(app, image);
  add_oracle(app, oracle);
  add_tables(app, tables);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (app.got_subcommand("eval"))
      return run_eval(ctx, eval);
    if (app.got_subcommand("decompose"))
      return run_decompose(ctx, decompose);
    if (app.got_subcommand("image"))
      return run_image(ctx, image);
    if (app.got_subcommand("oracle"))
      return run_oracle(ctx, oracle);
    return run_tables(ctx, tables);
  } catch (const Failure& f) {
    std::fprintf(stderr, "shellfield: %s\n", f.message.c_str());
    return f.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "shellfield: internal error: %s\n", e.what());
    return kExitInternal;
  }
}
