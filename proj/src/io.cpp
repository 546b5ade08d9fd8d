#include "shellfield/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "shellfield/errors.hpp"

namespace shellfield::io {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

template <class T>
T field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key))
    throw FormatError(std::string(what) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string(what) + ": field '" + key + "' has the wrong type");
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback, const char* what) {
  return j.contains(key) ? field<T>(j, key, what) : fallback;
}

// Little-endian byte writers; the host order is swapped when needed.
template <class T>
void put(std::string& out, T value) {
  auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes.begin(), bytes.end());
  out.append(bytes.data(), bytes.size());
}

template <class T>
T get(std::string_view in, std::size_t offset) {
  if (offset + sizeof(T) > in.size())
    throw FormatError("binary data truncated");
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), in.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

}  // namespace

std::string format_table(const TableDocument& doc) {
  const ShellModel& m = doc.model;
  std::string out = "{\n";
  out += "  \"dimension\": " + std::to_string(m.dimension()) + ",\n";
  out += "  \"x_max\": " + num(m.x_max()) + ",\n";
  out += "  \"label\": " + quoted(m.label()) + ",\n";
  out += "  \"terms\": [\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    const ShellTerm& t = m.terms()[i];
    out += "    {\"mu\": " + num(t.mu) + ", \"nu\": " + num(t.nu) + ", \"kappa\": " + num(t.kappa) + "}";
    out += i + 1 < m.size() ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"meta\": {\"source\": " + quoted(doc.meta.source);
  if (doc.meta.max_abs_error)
    out += ", \"max_abs_error\": " + num(*doc.meta.max_abs_error);
  out += "}\n}\n";
  return out;
}

TableDocument parse_table(std::string_view text) {
  const char* what = "table";
  const json j = parse_json(text, what);
  const int dim = field<int>(j, "dimension", what);
  const double x_max = field<double>(j, "x_max", what);
  const std::string label = field_or<std::string>(j, "label", "", what);
  const json terms = field<json>(j, "terms", what);
  if (!terms.is_array())
    throw FormatError("table: 'terms' must be an array");
  std::vector<ShellTerm> list;
  for (const json& t : terms)
    list.push_back({field<double>(t, "kappa", what), field<double>(t, "mu", what),
                    field<double>(t, "nu", what)});
  TableDocument doc{ShellModel(dim, std::move(list), x_max, label), {}};
  if (j.contains("meta")) {
    const json& meta = j.at("meta");
    doc.meta.source = field_or<std::string>(meta, "source", "", what);
    if (meta.contains("max_abs_error") && !meta.at("max_abs_error").is_null())
      doc.meta.max_abs_error = field<double>(meta, "max_abs_error", what);
  }
  return doc;
}

std::string format_profile(const RadialProfile& profile) {
  std::string out = "# x f\n";
  for (std::size_t i = 0; i < profile.size(); ++i)
    out += num(profile.x_at(i)) + " " + num(profile.values()[i]) + "\n";
  return out;
}

RadialProfile parse_profile(std::string_view text, int dimension) {
  std::vector<double> xs, fs;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    std::istringstream ls(line);
    double x, f;
    if (!(ls >> x >> f))
      throw FormatError("profile line " + std::to_string(lineno) + ": expected two numbers");
    xs.push_back(x);
    fs.push_back(f);
  }
  if (xs.size() < 2)
    throw FormatError("profile: need at least two samples");
  const double step = (xs.back() - xs.front()) / double(xs.size() - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double expect = xs.front() + step * double(i);
    if (std::abs(xs[i] - expect) > 1e-9 * std::max(std::abs(step) * double(xs.size()), 1.0))
      throw FormatError("profile: x column is not uniformly spaced");
  }
  return RadialProfile(dimension, xs.front(), step, std::move(fs));
}

std::vector<std::string> AtomModelDocument::missing_types() const {
  std::vector<std::string> missing;
  for (const auto& a : atoms)
    if (!types.count(a.type_label) &&
        std::find(missing.begin(), missing.end(), a.type_label) == missing.end())
      missing.push_back(a.type_label);
  return missing;
}

AtomModelDocument parse_atom_model(std::string_view text) {
  const char* what = "atom model";
  const json j = parse_json(text, what);
  AtomModelDocument doc;
  const json atoms = field<json>(j, "atoms", what);
  if (!atoms.is_array())
    throw FormatError("atom model: 'atoms' must be an array");
  for (const json& a : atoms) {
    imaging::AtomSite site;
    site.position = {field<double>(a, "x", what), field<double>(a, "y", what),
                     field<double>(a, "z", what)};
    site.b_factor = field_or<double>(a, "b_factor", 0.0, what);
    site.occupancy = field_or<double>(a, "occupancy", 1.0, what);
    site.type_label = field<std::string>(a, "type_label", what);
    site.validate();
    doc.atoms.push_back(std::move(site));
  }
  const json types = field_or<json>(j, "types", json::object(), what);
  if (!types.is_object())
    throw FormatError("atom model: 'types' must be an object");
  for (const auto& [label, t] : types.items()) {
    imaging::GaussianAtomModel m;
    m.label = label;
    const json terms = field<json>(t, "terms", what);
    if (!terms.is_array())
      throw FormatError("atom model: terms of '" + label + "' must be an array");
    for (const json& g : terms)
      m.terms.push_back({field<double>(g, "a", what), field<double>(g, "B", what)});
    m.validate();
    doc.types.emplace(label, std::move(m));
  }
  return doc;
}

std::string format_mrc(const imaging::VolumeGrid& volume) {
  const auto& spec = volume.spec();
  const auto& v = volume.values();
  double dmin = v.empty() ? 0 : v[0], dmax = dmin, dsum = 0;
  for (double e : v) {
    dmin = std::min(dmin, e);
    dmax = std::max(dmax, e);
    dsum += e;
  }
  const double dmean = v.empty() ? 0 : dsum / double(v.size());
  double rms = 0;
  for (double e : v)
    rms += (e - dmean) * (e - dmean);
  rms = v.empty() ? 0 : std::sqrt(rms / double(v.size()));

  std::string out;
  out.reserve(1024 + 4 * v.size());
  for (int a = 0; a < 3; ++a)
    put<std::int32_t>(out, static_cast<std::int32_t>(spec.dims[a]));  // words 1-3
  put<std::int32_t>(out, 2);                                         // word 4: MODE
  for (int a = 0; a < 3; ++a)
    put<std::int32_t>(out, 0);  // words 5-7: NXSTART..
  for (int a = 0; a < 3; ++a)
    put<std::int32_t>(out, static_cast<std::int32_t>(spec.dims[a]));  // words 8-10: MX..
  for (int a = 0; a < 3; ++a)
    put<float>(out, static_cast<float>(spec.spacing[a] * double(spec.dims[a])));  // 11-13 CELLA
  for (int a = 0; a < 3; ++a)
    put<float>(out, 90.0f);  // 14-16 CELLB
  for (std::int32_t a = 1; a <= 3; ++a)
    put<std::int32_t>(out, a);  // 17-19 MAPC, MAPR, MAPS
  put<float>(out, static_cast<float>(dmin));   // 20
  put<float>(out, static_cast<float>(dmax));   // 21
  put<float>(out, static_cast<float>(dmean));  // 22
  put<std::int32_t>(out, 1);                   // 23 ISPG
  put<std::int32_t>(out, 0);                   // 24 NSYMBT
  out.append(4 * (49 - 25 + 1), '\0');         // 25-49 EXTRA
  // word 28: NVERSION
  {
    auto nversion = std::bit_cast<std::array<char, 4>>(std::int32_t{20140});
    if constexpr (std::endian::native == std::endian::big)
      std::reverse(nversion.begin(), nversion.end());
    std::memcpy(out.data() + 27 * 4, nversion.data(), 4);
  }
  for (int a = 0; a < 3; ++a)
    put<float>(out, static_cast<float>(spec.origin[a]));  // 50-52 ORIGIN
  out += "MAP ";                                           // 53
  out += std::string("\x44\x44\x00\x00", 4);               // 54 MACHST
  put<float>(out, static_cast<float>(rms));                // 55 RMS
  put<std::int32_t>(out, 0);                               // 56 NLABL
  out.append(800, '\0');                                   // 57-256 labels
  for (double e : v)
    put<float>(out, static_cast<float>(e));
  return out;
}

MrcHeader parse_mrc(std::string_view bytes, std::vector<float>* data) {
  if (bytes.size() < 1024)
    throw FormatError("mrc: header truncated");
  if (bytes.substr(208, 4) != "MAP ")
    throw FormatError("mrc: missing MAP signature");
  MrcHeader h;
  for (int a = 0; a < 3; ++a) {
    h.dims[a] = get<std::int32_t>(bytes, 4 * a);
    h.cell[a] = get<float>(bytes, 40 + 4 * a);
    h.origin[a] = get<float>(bytes, 196 + 4 * a);
  }
  h.mode = get<std::int32_t>(bytes, 12);
  h.dmin = get<float>(bytes, 76);
  h.dmax = get<float>(bytes, 80);
  h.dmean = get<float>(bytes, 84);
  if (data) {
    if (h.mode != 2)
      throw FormatError("mrc: only mode 2 data can be read");
    const std::size_t n = std::size_t(h.dims[0]) * std::size_t(h.dims[1]) * std::size_t(h.dims[2]);
    const std::size_t ext = static_cast<std::size_t>(get<std::int32_t>(bytes, 92));
    data->resize(n);
    for (std::size_t i = 0; i < n; ++i)
      (*data)[i] = get<float>(bytes, 1024 + ext + 4 * i);
  }
  return h;
}

std::string format_raw(const imaging::VolumeGrid& volume) {
  std::string out;
  out.reserve(8 * volume.values().size());
  for (double e : volume.values())
    put<double>(out, e);
  return out;
}

std::string format_raw_meta(const imaging::VolumeGrid& volume) {
  const auto& s = volume.spec();
  auto triple = [](auto a, auto b, auto c) { return "[" + a + ", " + b + ", " + c + "]"; };
  std::string out = "{\n";
  out += "  \"format\": \"float64-le\",\n";
  out += "  \"order\": \"x-fastest\",\n";
  out += "  \"dims\": " + triple(std::to_string(s.dims[0]), std::to_string(s.dims[1]), std::to_string(s.dims[2])) + ",\n";
  out += "  \"origin\": " + triple(num(s.origin[0]), num(s.origin[1]), num(s.origin[2])) + ",\n";
  out += "  \"spacing\": " + triple(num(s.spacing[0]), num(s.spacing[1]), num(s.spacing[2])) + "\n";
  out += "}\n";
  return out;
}

imaging::VolumeGrid parse_raw(std::string_view bytes, std::string_view meta) {
  const char* what = "raw volume metadata";
  const json j = parse_json(meta, what);
  imaging::GridSpec spec;
  const auto dims = field<std::vector<std::size_t>>(j, "dims", what);
  const auto origin = field<std::vector<double>>(j, "origin", what);
  const auto spacing = field<std::vector<double>>(j, "spacing", what);
  if (dims.size() != 3 || origin.size() != 3 || spacing.size() != 3)
    throw FormatError("raw volume metadata: dims, origin and spacing need three entries");
  for (int a = 0; a < 3; ++a) {
    spec.dims[a] = dims[a];
    spec.origin[a] = origin[a];
    spec.spacing[a] = spacing[a];
  }
  spec.validate();
  if (bytes.size() != 8 * spec.voxel_count())
    throw FormatError("raw volume: size does not match the metadata");
  std::vector<double> values(spec.voxel_count());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = get<double>(bytes, 8 * i);
  return imaging::VolumeGrid(spec, std::move(values));
}

std::string format_manifest(const RunManifest& m) {
  std::string out = "{\n  \"command_line\": [";
  for (std::size_t i = 0; i < m.command_line.size(); ++i)
    out += (i ? ", " : "") + quoted(m.command_line[i]);
  out += "],\n  \"inputs\": [";
  for (std::size_t i = 0; i < m.input_digests.size(); ++i)
    out += std::string(i ? ",\n    " : "\n    ") + "{\"path\": " + quoted(m.input_digests[i].first) +
           ", \"sha256\": " + quoted(m.input_digests[i].second) + "}";
  out += m.input_digests.empty() ? "],\n" : "\n  ],\n";
  out += "  \"outputs\": [";
  for (std::size_t i = 0; i < m.outputs.size(); ++i)
    out += (i ? ", " : "") + quoted(m.outputs[i]);
  out += "],\n";
  out += "  \"tool_version\": " + quoted(m.tool_version) + ",\n";
  out += "  \"wall_seconds\": " + num(m.wall_seconds) + "\n}\n";
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
    throw Error("sha256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path + "' for reading");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad())
    throw IoError("error reading '" + path + "'");
  return data;
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out)
    throw IoError("error writing '" + path + "'");
}

}  // namespace shellfield::io
