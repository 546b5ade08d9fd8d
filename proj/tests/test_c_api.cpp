// Exercises the shared library through its C header only.
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shellfield.h"

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

double gauss3(double x, void* user) { return oracle::gauss(3, x, *static_cast<double*>(user)); }

double not_finite(double, void*) { return NAN; }

}  // namespace

TEST_CASE("scalar functions and status codes") {
  double v = 0;
  CHECK(sf_omega(3, 0.0, 0.0, 0.1, &v) == SF_OK);
  CHECK(v == doctest::Approx(std::pow(2 * oracle::pi * 0.1, -1.5)).epsilon(1e-13));
  CHECK(sf_interference(3, 0.0, &v) == SF_OK);
  CHECK(v == doctest::Approx(4 * oracle::pi / 3).epsilon(1e-14));
  CHECK(sf_coulomb_resolution_image(1.0, 2.0, 0.0, &v) == SF_OK);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sf_si_over_x(0.0, &v) == SF_OK);
  CHECK(v == 1.0);

  CHECK(sf_omega(3, 1.0, 0.0, -1.0, &v) == SF_ERR_DOMAIN);
  CHECK(std::strlen(sf_last_error()) > 0);
  CHECK(sf_omega(3, 1.0, 0.0, 1.0, nullptr) == SF_ERR_ARGUMENT);
  CHECK(std::string(sf_status_name(SF_ERR_LOOKUP)) == "lookup error");
  CHECK(std::string(sf_version()).size() >= 5);
  CHECK(sf_b_to_nu(sf_nu_to_b(0.3)) == doctest::Approx(0.3));
}

TEST_CASE("models and tables") {
  sf_model* m = nullptr;
  CHECK(sf_table_load("nope", &m) == SF_ERR_LOOKUP);
  CHECK(m == nullptr);
  REQUIRE(sf_table_load("pi3", &m) == SF_OK);
  CHECK(sf_model_size(m) == 40);
  CHECK(sf_model_dimension(m) == 3);
  double kappa, mu, nu;
  REQUIRE(sf_model_term(m, 39, &kappa, &mu, &nu) == SF_OK);
  CHECK(mu == 19.997212);
  CHECK(sf_model_term(m, 40, &kappa, &mu, &nu) == SF_ERR_ARGUMENT);
  CHECK(sf_table_count() == 4);

  double full = 0, part = 0;
  CHECK(sf_model_eval(m, 0.0, 0, &full) == SF_OK);
  CHECK(full == doctest::Approx(4 * oracle::pi / 3).epsilon(1e-3));
  CHECK(sf_model_eval(m, 15.0, 0, &full) == SF_OK);
  CHECK(sf_model_eval(m, 15.0, 21, &part) == SF_OK);
  CHECK(std::abs(full - oracle::interference(3, 15.0)) < 1e-3);
  CHECK(std::abs(part) < 1e-6);

  const std::string path = temp_path("sf_c_api_table.json");
  const double err = 6e-4;
  REQUIRE(sf_table_write(path.c_str(), m, "published", &err) == SF_OK);
  sf_model* back = nullptr;
  char source[32];
  double read_err = 0;
  int has_err = 0;
  REQUIRE(sf_table_read(path.c_str(), &back, source, sizeof source, &read_err, &has_err) == SF_OK);
  CHECK(std::string(source) == "published");
  CHECK(has_err == 1);
  CHECK(read_err == err);
  for (size_t i = 0; i < 40; ++i) {
    double a[3], b[3];
    sf_model_term(m, i, &a[0], &a[1], &a[2]);
    sf_model_term(back, i, &b[0], &b[1], &b[2]);
    CHECK(std::memcmp(a, b, sizeof a) == 0);
  }
  std::remove(path.c_str());
  sf_model_free(back);
  sf_model_free(m);
  sf_model_free(nullptr);

  const double k[] = {1.0}, u[] = {2.0}, n[] = {0.05};
  CHECK(sf_model_create(3, 1, k, u, n, 0.0, "bad", &m) == SF_ERR_ARGUMENT);
}

TEST_CASE("transforms through callbacks") {
  double nu = 0.1, value = 0, error = 0;
  const sf_quadrature q = sf_quadrature_for_gaussian(nu, 0.0);
  REQUIRE(sf_radial_ft(3, gauss3, &nu, 0.5, &q, &value, &error) == SF_OK);
  CHECK(value == doctest::Approx(std::exp(-2 * oracle::pi * oracle::pi * nu * 0.25)).epsilon(1e-9));
  CHECK(sf_radial_ft(3, not_finite, nullptr, 0.5, &q, &value, &error) == SF_ERR_DOMAIN);
}

TEST_CASE("decompose a single shell") {
  sf_model* gen = nullptr;
  const double k[] = {1.0}, u[] = {2.0}, n[] = {0.05};
  REQUIRE(sf_model_create(3, 1, k, u, n, 4.0, "gen", &gen) == SF_OK);
  sf_profile* target = nullptr;
  REQUIRE(sf_profile_from_model(gen, 0.0, 0.001, 4001, &target) == SF_OK);
  size_t ripples = 0;
  CHECK(sf_detect_ripples(target, &ripples) == SF_OK);
  CHECK(ripples == 1);
  sf_model* fit = nullptr;
  sf_fit_report report{};
  const sf_fit_config cfg = sf_fit_config_default();
  REQUIRE(sf_decompose(target, &cfg, &fit, &report) == SF_OK);
  REQUIRE(sf_model_size(fit) == 1);
  double kappa, mu, nu;
  sf_model_term(fit, 0, &kappa, &mu, &nu);
  CHECK(std::abs(kappa - 1.0) <= 1e-6);
  CHECK(std::abs(mu - 2.0) <= 1e-6);
  CHECK(std::abs(nu - 0.05) <= 1e-6);
  CHECK(report.max_abs_error < 1e-8);
  sf_model_free(fit);
  sf_profile_free(target);
  sf_model_free(gen);
}

TEST_CASE("atoms and maps") {
  sf_atoms* atoms = nullptr;
  CHECK(sf_atoms_parse("{", &atoms) == SF_ERR_FORMAT);
  REQUIRE(sf_atoms_parse(R"({"atoms": [
      {"x": 0, "y": 0, "z": 0, "b_factor": 20, "type_label": "C"},
      {"x": 1, "y": 0, "z": 0, "type_label": "Q"},
      {"x": 2, "y": 0, "z": 0, "type_label": "N"}],
    "types": {"C": {"terms": [{"a": 1, "B": 10}]}}})",
                         &atoms) == SF_OK);
  CHECK(std::string(sf_atoms_missing_types(atoms)) == "Q, N");
  sf_grid grid{{-3, -3, -3}, {0.5, 0.5, 0.5}, {13, 13, 13}};
  sf_volume* vol = nullptr;
  CHECK(sf_synthesize_map(atoms, 1.0, 0.0, &grid, 1, &vol) == SF_ERR_LOOKUP);
  CHECK(std::string(sf_last_error()).find("Q, N") != std::string::npos);
  sf_atoms_free(atoms);

  REQUIRE(sf_atoms_parse(R"({"atoms": [
      {"x": 0, "y": 0, "z": 0, "b_factor": 20, "type_label": "C"},
      {"x": 1, "y": 0.5, "z": 0, "occupancy": 0.5, "type_label": "C"}],
    "types": {"C": {"terms": [{"a": 1, "B": 10}, {"a": 2, "B": 30}]}}})",
                         &atoms) == SF_OK);
  sf_grid fine{{-6, -6, -6}, {0.25, 0.25, 0.25}, {49, 49, 49}};
  REQUIRE(sf_synthesize_map(atoms, 0.0, 0.0, &fine, 2, &vol) == SF_OK);
  const double* values = sf_volume_values(vol);
  double sum = 0;
  for (size_t i = 0; i < sf_volume_voxel_count(vol); ++i)
    sum += values[i];
  CHECK(sum * 0.25 * 0.25 * 0.25 == doctest::Approx(4.5).epsilon(1e-2));

  const std::string raw = temp_path("sf_c_api.raw"), meta = temp_path("sf_c_api.json");
  REQUIRE(sf_volume_write_raw(raw.c_str(), meta.c_str(), vol) == SF_OK);
  sf_volume* back = nullptr;
  REQUIRE(sf_volume_read_raw(raw.c_str(), meta.c_str(), &back) == SF_OK);
  CHECK(std::memcmp(sf_volume_values(back), values, 8 * sf_volume_voxel_count(vol)) == 0);
  char hex[65];
  REQUIRE(sf_sha256_file(raw.c_str(), hex) == SF_OK);
  CHECK(std::strlen(hex) == 64);
  std::remove(raw.c_str());
  std::remove(meta.c_str());
  sf_volume_free(back);

  sf_model* image = nullptr;
  REQUIRE(sf_atom_image_model(atoms, "C", 20.0, 2.0, 0.0, &image) == SF_OK);
  CHECK(sf_model_size(image) == 80);
  CHECK(sf_atom_image_model(atoms, "X", 20.0, 2.0, 0.0, &image) == SF_ERR_LOOKUP);
  sf_model_free(image);
  sf_volume_free(vol);
  sf_atoms_free(atoms);
}
