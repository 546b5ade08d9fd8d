// File formats: coefficient tables (JSON), radial profiles (two-column
// text), atomic models (JSON), volumes (MRC2014 and raw float64 with a JSON
// sidecar) and run manifests. Numbers are written with 17 significant digits
// so every double survives a round trip.

#ifndef SHELLFIELD_IO_HPP_
#define SHELLFIELD_IO_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shellfield/imaging.hpp"
#include "shellfield/rfourier.hpp"
#include "shellfield/shells.hpp"

namespace shellfield::io {

struct TableMeta {
  std::string source;
  std::optional<double> max_abs_error;
};

struct TableDocument {
  ShellModel model;
  TableMeta meta;
};

std::string format_table(const TableDocument& doc);
// FormatError on malformed JSON or missing fields; ArgumentError if the
// model itself is invalid.
TableDocument parse_table(std::string_view text);

// "# x f" then one "x f" line per sample.
std::string format_profile(const RadialProfile& profile);
// The x column must be uniformly spaced (relative tolerance 1e-9).
RadialProfile parse_profile(std::string_view text, int dimension);

// {"atoms": [{x, y, z, b_factor, occupancy, type_label}],
//  "types": {label: {"terms": [{"a": .., "B": ..}]}}}
// occupancy defaults to 1 and b_factor to 0 when absent.
struct AtomModelDocument {
  std::vector<imaging::AtomSite> atoms;
  std::map<std::string, imaging::GaussianAtomModel> types;

  // Labels used by atoms without a type entry, in first-use order.
  std::vector<std::string> missing_types() const;
};

AtomModelDocument parse_atom_model(std::string_view text);

// MRC2014, mode 2 (float32), little-endian, x fastest.
std::string format_mrc(const imaging::VolumeGrid& volume);

struct MrcHeader {
  std::array<std::int32_t, 3> dims{};
  std::int32_t mode = 0;
  std::array<float, 3> cell{};
  std::array<float, 3> origin{};
  float dmin = 0, dmax = 0, dmean = 0;
};
// Header and float data of an MRC file written by format_mrc.
MrcHeader parse_mrc(std::string_view bytes, std::vector<float>* data = nullptr);

// Raw little-endian float64 values and the sidecar describing the grid.
std::string format_raw(const imaging::VolumeGrid& volume);
std::string format_raw_meta(const imaging::VolumeGrid& volume);
imaging::VolumeGrid parse_raw(std::string_view bytes, std::string_view meta);

struct RunManifest {
  std::vector<std::string> command_line;
  // path -> lowercase hex SHA-256
  std::vector<std::pair<std::string, std::string>> input_digests;
  std::vector<std::string> outputs;
  std::string tool_version;
  double wall_seconds = 0.0;
};

std::string format_manifest(const RunManifest& manifest);

std::string sha256_hex(std::string_view bytes);

// Whole-file helpers; IoError on failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace shellfield::io

#endif  // SHELLFIELD_IO_HPP_
