// Limited-resolution images of atoms and point charges, and 3-D map
// synthesis from atomic models.
//
// Displacement parameters B use the crystallographic convention B = 8 pi^2 nu.
// Every B accepted here is converted with b_to_nu and nowhere else.

#ifndef SHELLFIELD_IMAGING_HPP_
#define SHELLFIELD_IMAGING_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "shellfield/decomp.hpp"
#include "shellfield/rfourier.hpp"
#include "shellfield/shells.hpp"

namespace shellfield::imaging {

double b_to_nu(double b);
double nu_to_b(double nu);

// Sum of isotropic 3-D Gaussians a * g3(x; B / 8 pi^2) describing an atom type.
struct GaussianTerm {
  double a = 0.0;
  double b = 0.0;
};

struct GaussianAtomModel {
  std::vector<GaussianTerm> terms;
  std::string label;

  // ArgumentError if empty, any B < 0 or any amplitude non-finite.
  void validate() const;
  double total_amplitude() const;
};

struct AtomSite {
  std::array<double, 3> position{};
  double b_factor = 0.0;
  double occupancy = 1.0;
  std::string type_label;

  void validate() const;
};

struct ResolutionSpec {
  double d0 = 1.0;
  double nu0 = 0.0;

  void validate() const;
};

struct GridSpec {
  std::array<double, 3> origin{};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::array<std::size_t, 3> dims{1, 1, 1};

  void validate() const;
  std::size_t voxel_count() const { return dims[0] * dims[1] * dims[2]; }
  double voxel_volume() const { return spacing[0] * spacing[1] * spacing[2]; }
};

// Scalar values on a regular grid, x index fastest.
class VolumeGrid {
public:
  VolumeGrid(GridSpec spec, std::vector<double> values);
  explicit VolumeGrid(GridSpec spec);

  const GridSpec& spec() const { return spec_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + spec_.dims[0] * (j + spec_.dims[1] * k);
  }
  double at(std::size_t i, std::size_t j, std::size_t k) const { return values_[index(i, j, k)]; }
  std::array<double, 3> position(std::size_t i, std::size_t j, std::size_t k) const;
  double sum() const;

private:
  GridSpec spec_;
  std::vector<double> values_;
};

// Image of a * g3(nu) at resolution d0 with extra blur nu0, built from a 3-D
// interference-function series: terms (a kappa_m, d0 mu_m, nu + d0^2 nu_m + nu0).
ShellModel gaussian_image_model(double a, double nu, const ResolutionSpec& res,
                                const ShellModel& pi3);

// Image of a whole atom with displacement B_n: the double sum over the
// atom's Gaussians (outer) and the series terms (inner) as one model.
ShellModel atom_image_model(const GaussianAtomModel& atom, double b_n, const ResolutionSpec& res,
                            const ShellModel& pi3);
double atom_image_radial(const GaussianAtomModel& atom, double b_n, const ResolutionSpec& res,
                         const ShellModel& pi3, double x);

// The atom without resolution truncation: terms (a_k, 0, (B_n + B_k)/8 pi^2 + nu0).
ShellModel unresolved_atom_model(const GaussianAtomModel& atom, double b_n, double nu0);

// Image of an immobile atom with form factor F at resolution d0, sampled on
// [0, x_max] by the truncated inverse transform and decomposed into shells.
// x_max defaults to 10 d0.
ShellModel precompute_type_image(const RadialFunction& form_factor, double d0,
                                 const decomp::FitConfig& fit, double x_max = 0.0);

// Adds B / 8 pi^2 to every nu.
ShellModel apply_b_shift(const ShellModel& model, double b);

// (K / x) erf(x / sqrt(2 nu)); K sqrt(2 / (pi nu)) at x = 0.
double coulomb_blurred(double k, double nu, double x);
// 4 pi K / (lambda^2 + 4 pi^2 s^2)
double yukawa_ft(double k, double lambda, double s);
// (4 K / d0) Si(z) / z with z = 2 pi x / d0.
double coulomb_resolution_image(double k, double d0, double x);

struct SynthesisOptions {
  // worker threads; 0 uses the hardware concurrency
  unsigned threads = 0;
  // an atom contributes out to the radius where its widest-reaching term has
  // fallen to this fraction of its peak
  double cutoff_fraction = 1e-8;
};

struct SynthesisResult {
  VolumeGrid volume;
  std::vector<std::string> warnings;
};

// Cutoff radius of one atom's model: max over terms of mu + sqrt(2 nu ln(1/fraction)).
double atom_cutoff_radius(const ShellModel& model, double cutoff_fraction);

// values[p] = sum_n occ_n * sum_m kappa_m Omega3(|p - x_n|; mu_m, nu_m + B_n/8pi^2 + nu0)
// with the type model picked by the atom's label. LookupError naming every
// missing label. Per-voxel summation order is the atom order, so the result
// does not depend on the thread count.
SynthesisResult synthesize_map(const std::vector<AtomSite>& atoms,
                               const std::map<std::string, ShellModel>& type_models,
                               const ResolutionSpec& res, const GridSpec& grid,
                               const SynthesisOptions& options = {});

}  // namespace shellfield::imaging

#endif  // SHELLFIELD_IMAGING_HPP_
