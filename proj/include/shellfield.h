/* C interface to the shellfield library.
 *
 * Every fallible call returns an sf_status; on failure the message is
 * available from sf_last_error() on the same thread until the next failing
 * call. Objects are opaque handles released with their _free function;
 * passing NULL to a _free function is a no-op. Output pointers are written
 * only on success unless stated otherwise. */

#ifndef SHELLFIELD_H_
#define SHELLFIELD_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SF_API __declspec(dllexport)
#else
#define SF_API __attribute__((visibility("default")))
#endif

typedef enum sf_status {
  SF_OK = 0,
  SF_ERR_ARGUMENT = 1,     /* malformed argument or configuration */
  SF_ERR_DOMAIN = 2,       /* argument outside the mathematical domain */
  SF_ERR_RANGE = 3,        /* result or argument beyond a supported threshold */
  SF_ERR_QUADRATURE = 4,   /* numerical integration did not reach tolerance */
  SF_ERR_LOOKUP = 5,       /* unknown table name or atom type */
  SF_ERR_FORMAT = 6,       /* malformed input document */
  SF_ERR_OPTIMIZATION = 7, /* refinement diverged */
  SF_ERR_IO = 8,           /* file could not be read or written */
  SF_ERR_INTERNAL = 9
} sf_status;

SF_API const char* sf_last_error(void);
SF_API const char* sf_status_name(sf_status status);
SF_API const char* sf_version(void);

/* Radial functions supplied by the caller. A non-finite return aborts the
 * computation with SF_ERR_DOMAIN. */
typedef double (*sf_radial_fn)(double x, void* user);

/* ---- scalar functions ---- */

SF_API sf_status sf_gaussian(int dim, double x, double nu, double* out);
/* unit-ball interference function, pi_N(0) = volume of the unit ball */
SF_API sf_status sf_interference(int dim, double x, double* out);
SF_API sf_status sf_omega(int dim, double x, double mu, double nu, double* out);
SF_API sf_status sf_omega_gradient(int dim, double x, double mu, double nu, double* d_x,
                                   double* d_mu, double* d_nu);
SF_API sf_status sf_omega_fourier(int dim, double s, double mu, double nu, double* out);
/* Si(u)/u with u = 2 pi x */
SF_API sf_status sf_si_over_x(double x, double* out);
SF_API sf_status sf_sine_integral(double x, double* out);
/* (4 K / d0) Si(z) / z, z = 2 pi x / d0 */
SF_API sf_status sf_coulomb_resolution_image(double k, double d0, double x, double* out);
/* (K / x) erf(x / sqrt(2 nu)) */
SF_API sf_status sf_coulomb_blurred(double k, double nu, double x, double* out);
SF_API sf_status sf_yukawa_ft(double k, double lambda, double s, double* out);
SF_API double sf_b_to_nu(double b);
SF_API double sf_nu_to_b(double nu);

/* ---- shell-series models ---- */

typedef struct sf_model sf_model;

SF_API sf_status sf_model_create(int dim, size_t count, const double* kappa, const double* mu,
                                 const double* nu, double x_max, const char* label,
                                 sf_model** out);
SF_API void sf_model_free(sf_model* model);
SF_API size_t sf_model_size(const sf_model* model);
SF_API int sf_model_dimension(const sf_model* model);
SF_API double sf_model_x_max(const sf_model* model);
SF_API const char* sf_model_label(const sf_model* model);
SF_API sf_status sf_model_term(const sf_model* model, size_t index, double* kappa, double* mu,
                               double* nu);
/* Sum of the first truncate_to terms; 0 means all. */
SF_API sf_status sf_model_eval(const sf_model* model, double x, size_t truncate_to, double* out);
SF_API sf_status sf_model_truncated(const sf_model* model, size_t count, sf_model** out);
SF_API sf_status sf_model_convolve_gaussian(const sf_model* model, double nu0, sf_model** out);
SF_API sf_status sf_model_rescale(const sf_model* model, double alpha, sf_model** out);
/* Adds B / 8 pi^2 to every width. */
SF_API sf_status sf_model_apply_b_shift(const sf_model* model, double b, sf_model** out);

/* Bundled published tables: pi3_interference, pi1_interference,
 * pi2_interference, si_over_x (aliases pi3, pi1, pi2). */
SF_API size_t sf_table_count(void);
SF_API const char* sf_table_name(size_t index);
SF_API sf_status sf_table_load(const char* name, sf_model** out);
SF_API sf_status sf_table_max_error(const char* name, double* out);

/* Table documents. max_abs_error may be NULL. source_out receives at most
 * source_len bytes including the terminator and may be NULL. has_error is
 * set to 0 when the document carries no error. */
SF_API sf_status sf_table_write(const char* path, const sf_model* model, const char* source,
                                const double* max_abs_error);
SF_API sf_status sf_table_read(const char* path, sf_model** out, char* source_out,
                               size_t source_len, double* max_abs_error, int* has_error);

/* ---- sampled radial profiles ---- */

typedef struct sf_profile sf_profile;

SF_API sf_status sf_profile_create(int dim, double x0, double step, size_t count,
                                   const double* values, sf_profile** out);
SF_API sf_status sf_profile_sample(int dim, sf_radial_fn f, void* user, double x0, double step,
                                   size_t count, sf_profile** out);
SF_API sf_status sf_profile_from_model(const sf_model* model, double x0, double step,
                                       size_t count, sf_profile** out);
SF_API void sf_profile_free(sf_profile* profile);
SF_API size_t sf_profile_size(const sf_profile* profile);
SF_API int sf_profile_dimension(const sf_profile* profile);
SF_API double sf_profile_x0(const sf_profile* profile);
SF_API double sf_profile_step(const sf_profile* profile);
SF_API const double* sf_profile_values(const sf_profile* profile);
SF_API sf_status sf_profile_interpolate(const sf_profile* profile, double x, double* out);
SF_API sf_status sf_profile_write(const char* path, const sf_profile* profile);
SF_API sf_status sf_profile_read(const char* path, int dim, sf_profile** out);

/* ---- radial Fourier transforms ---- */

typedef struct sf_quadrature {
  double abs_tol;
  double rel_tol;
  int max_subdivisions;
  double upper_cutoff; /* direct-space integration radius */
} sf_quadrature;

SF_API sf_quadrature sf_quadrature_default(void);
/* Cutoff at mu + 10 sqrt(nu). */
SF_API sf_quadrature sf_quadrature_for_gaussian(double nu, double mu);

/* q may be NULL for the defaults. error receives the estimate and may be NULL;
 * on SF_ERR_QUADRATURE both value and error are still written. */
SF_API sf_status sf_radial_ft(int dim, sf_radial_fn f, void* user, double s,
                              const sf_quadrature* q, double* value, double* error);
SF_API sf_status sf_radial_ift_truncated(int dim, sf_radial_fn F, void* user, double x,
                                         double s_max, const sf_quadrature* q, double* value,
                                         double* error);
/* dim 1 or 3 */
SF_API sf_status sf_radial_convolve(int dim, sf_radial_fn f, void* f_user, sf_radial_fn g,
                                    void* g_user, double x, const sf_quadrature* q,
                                    double* value, double* error);

/* ---- decomposition ---- */

typedef enum sf_strategy { SF_STRATEGY_PER_RIPPLE = 0, SF_STRATEGY_ADD_UNTIL_ACCURACY = 1 } sf_strategy;
typedef enum sf_weight { SF_WEIGHT_UNIFORM = 0, SF_WEIGHT_RADIAL = 1 } sf_weight;

typedef struct sf_fit_config {
  double grid_step; /* 0 fits on the profile's own samples */
  sf_weight weight_mode;
  int max_iterations;
  double gradient_tol;
  sf_strategy strategy;
  double accuracy; /* target max abs error for SF_STRATEGY_ADD_UNTIL_ACCURACY */
  size_t max_terms;
} sf_fit_config;

typedef struct sf_fit_report {
  double max_abs_error;
  double rms_error;
  int iterations;
  int converged;
  double gradient_norm;
  size_t ripple_count;
} sf_fit_report;

SF_API sf_fit_config sf_fit_config_default(void);
SF_API sf_status sf_detect_ripples(const sf_profile* target, size_t* count);
/* On SF_ERR_OPTIMIZATION *out and *report hold the best model seen. */
SF_API sf_status sf_decompose(const sf_profile* target, const sf_fit_config* config,
                              sf_model** out, sf_fit_report* report);
SF_API sf_status sf_evaluate_fit(const sf_model* model, const sf_profile* target,
                                 sf_fit_report* report);

/* ---- atoms, images and maps ---- */

typedef struct sf_atoms sf_atoms;

/* JSON: {"atoms": [{x, y, z, b_factor, occupancy, type_label}],
 *        "types": {label: {"terms": [{"a", "B"}]}}} */
SF_API sf_status sf_atoms_read(const char* path, sf_atoms** out);
SF_API sf_status sf_atoms_parse(const char* text, sf_atoms** out);
SF_API void sf_atoms_free(sf_atoms* atoms);
SF_API size_t sf_atoms_size(const sf_atoms* atoms);
SF_API sf_status sf_atoms_site(const sf_atoms* atoms, size_t index, double position[3],
                               double* b_factor, double* occupancy, const char** type_label);
/* Comma-separated labels used by atoms but missing from the types; empty if
 * none. The string lives as long as the handle. */
SF_API const char* sf_atoms_missing_types(const sf_atoms* atoms);

/* Image of one atom type with displacement b_n. d0 > 0 uses the bundled
 * 40-term interference series; d0 <= 0 gives the unresolved atom. */
SF_API sf_status sf_atom_image_model(const sf_atoms* atoms, const char* type_label, double b_n,
                                     double d0, double nu0, sf_model** out);
/* Image of a * g3(nu) at resolution d0 with extra blur nu0. */
SF_API sf_status sf_gaussian_image_model(double a, double nu, double d0, double nu0,
                                         sf_model** out);

typedef struct sf_grid {
  double origin[3];
  double spacing[3];
  size_t dims[3];
} sf_grid;

typedef struct sf_volume sf_volume;

/* threads 0 uses the hardware concurrency. d0 <= 0 selects the unresolved
 * route. Unknown atom types fail with SF_ERR_LOOKUP listing every label. */
SF_API sf_status sf_synthesize_map(const sf_atoms* atoms, double d0, double nu0,
                                   const sf_grid* grid, unsigned threads, sf_volume** out);
SF_API void sf_volume_free(sf_volume* volume);
SF_API sf_grid sf_volume_grid(const sf_volume* volume);
SF_API const double* sf_volume_values(const sf_volume* volume);
SF_API size_t sf_volume_voxel_count(const sf_volume* volume);
SF_API size_t sf_volume_warning_count(const sf_volume* volume);
SF_API const char* sf_volume_warning(const sf_volume* volume, size_t index);
SF_API sf_status sf_volume_write_mrc(const char* path, const sf_volume* volume);
SF_API sf_status sf_volume_write_raw(const char* path, const char* meta_path,
                                     const sf_volume* volume);
SF_API sf_status sf_volume_read_raw(const char* path, const char* meta_path, sf_volume** out);

/* ---- provenance ---- */

/* hex receives 64 lowercase hex digits and a terminator. */
SF_API sf_status sf_sha256_file(const char* path, char hex[65]);
SF_API sf_status sf_write_manifest(const char* path, int argc, const char* const* argv,
                                   size_t input_count, const char* const* inputs,
                                   size_t output_count, const char* const* outputs,
                                   double wall_seconds);

#ifdef __cplusplus
}
#endif

#endif /* SHELLFIELD_H_ */
