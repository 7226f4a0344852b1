#ifndef LSTS_MANIFEST_HPP
#define LSTS_MANIFEST_HPP

#include "lsts/errors.hpp"
#include "lsts/types.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace lsts {

/// Young's modulus and Poisson ratio of an isotropic phase.
struct IsotropicMaterial {
  double young = 1.0;
  double poisson = 0.3;
};

/**
 * Run description read from an INI-style manifest:
 *
 *   [pattern]   matrix = "64 0; 0 64"
 *   [kernel]    type = dirichlet | dlvp | boxspline, alpha, directions, radius
 *   [geometry]  type = homogeneous | laminate | hashin, plus shape keys
 *   [load]      strain = components (Mandel order, unscaled, or all d*d)
 *   [solver]    tolerance, max_iter, reference = auto | "lambda mu", metric
 *   [output]    directory, heatmap, width, height, colormap, strain_csv,
 *               phase_map, green_table
 *   [reference] pattern = finer matrix for a Dirichlet reference solve
 *   [sweep]     alpha1, alpha2 as lists or start:step:stop ranges
 */
struct Manifest {
  std::string source = "<string>";

  std::vector<std::vector<Integer>> pattern;

  std::string kernel_type = "dirichlet";
  std::vector<double> alpha;
  std::vector<std::vector<double>> directions;
  int radius = 16;

  std::string geometry_type;
  int normal = 1;
  double fraction = 0.5;
  IsotropicMaterial phase1{1.0, 0.3};
  IsotropicMaterial phase2{10.0, 0.3};
  IsotropicMaterial material{1.0, 0.3};
  double c1 = 0.05;
  double c2 = 0.35;
  double rho = 0.09;
  double rotation = 60.0;
  IsotropicMaterial core{1.0, 0.3};
  IsotropicMaterial coating{10.0, 0.3};
  IsotropicMaterial matrix{5.0, 0.3};
  std::vector<std::vector<double>> matrix_stiffness;

  std::vector<double> strain;

  double tolerance = 1e-10;
  int max_iter = 5000;
  std::optional<std::array<double, 2>> reference_lame;
  std::string metric = "mean_stress";

  std::string output_dir = "out";
  std::string heatmap = "none";
  int width = 0;
  int height = 0;
  std::string colormap = "viridis";
  bool strain_csv = true;
  bool phase_map = false;
  bool green_table = false;

  std::vector<std::vector<Integer>> reference_pattern;

  std::vector<double> sweep_alpha1;
  std::vector<double> sweep_alpha2;

  int dimension() const { return static_cast<int>(pattern.size()); }

  /// (alpha1, alpha2) pairs of the sweep, alpha1 outermost.
  std::vector<std::array<double, 2>> sweep_grid() const {
    std::vector<std::array<double, 2>> out;
    for (double a : sweep_alpha1)
      for (double b : sweep_alpha2) out.push_back({a, b});
    return out;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

template <typename T>
T parse_number(const std::string& token, int line) {
  T v{};
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw ParseError(line, "'" + token + "' is not a valid number");
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& value, int line) {
  std::vector<T> out;
  for (const auto& t : split_tokens(value)) out.push_back(parse_number<T>(t, line));
  return out;
}

template <typename T>
std::vector<std::vector<T>> parse_rows(const std::string& value, int line) {
  std::vector<std::vector<T>> rows;
  std::stringstream ss(value);
  std::string row;
  while (std::getline(ss, row, ';')) {
    auto r = parse_list<T>(row, line);
    if (!r.empty()) rows.push_back(std::move(r));
  }
  return rows;
}

/// "a b c" or "start:step:stop" (inclusive, values rounded to 12 decimals).
inline std::vector<double> parse_grid(const std::string& value, int line) {
  if (value.find(':') == std::string::npos) return parse_list<double>(value, line);
  std::vector<std::string> parts;
  std::stringstream ss(value);
  std::string p;
  while (std::getline(ss, p, ':')) parts.push_back(trim(p));
  if (parts.size() != 3) throw ParseError(line, "range must have the form start:step:stop");
  const double start = parse_number<double>(parts[0], line);
  const double step = parse_number<double>(parts[1], line);
  const double stop = parse_number<double>(parts[2], line);
  if (!(step > 0.0) || stop < start) throw ParseError(line, "range needs step > 0 and stop >= start");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double v = std::round((start + double(i) * step) * 1e12) / 1e12;
    if (v > stop + 1e-12) break;
    out.push_back(v);
  }
  return out;
}

inline bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ParseError(line, "'" + v + "' is not a boolean");
}

inline IsotropicMaterial parse_material(const std::string& v, int line) {
  const auto xs = parse_list<double>(v, line);
  if (xs.size() != 2) throw ParseError(line, "material must be given as \"E nu\"");
  return {xs[0], xs[1]};
}

inline int parse_int(const std::string& v, int line) { return parse_number<int>(v, line); }

}  // namespace detail

/// Checks required fields and cross-field consistency.
inline void validate(const Manifest& m) {
  if (m.pattern.empty()) throw ValidationError("missing required field pattern.matrix");
  const std::size_t d = m.pattern.size();
  if (d != 2 && d != 3) throw ValidationError("pattern.matrix must be 2x2 or 3x3");
  for (const auto& r : m.pattern)
    if (r.size() != d) throw ValidationError("pattern.matrix must be square");
  if (!m.reference_pattern.empty()) {
    if (m.reference_pattern.size() != d)
      throw ValidationError("reference.pattern must have the dimension of pattern.matrix");
    for (const auto& r : m.reference_pattern)
      if (r.size() != d) throw ValidationError("reference.pattern must be square");
  }
  static const std::set<std::string> kernels{"dirichlet", "dlvp", "boxspline"};
  if (!kernels.count(m.kernel_type))
    throw ValidationError("kernel.type must be dirichlet, dlvp or boxspline");
  if (m.kernel_type == "dlvp" && m.alpha.size() != d)
    throw ValidationError("kernel.alpha needs " + std::to_string(d) + " slopes");
  if (m.kernel_type == "boxspline") {
    if (m.directions.empty()) throw ValidationError("missing required field kernel.directions");
    for (const auto& r : m.directions)
      if (r.size() != d)
        throw ValidationError("kernel.directions entries need " + std::to_string(d) + " components");
  }
  if (m.geometry_type.empty()) throw ValidationError("missing required field geometry.type");
  static const std::set<std::string> geometries{"homogeneous", "laminate", "hashin"};
  if (!geometries.count(m.geometry_type))
    throw ValidationError("geometry.type must be homogeneous, laminate or hashin");
  if (m.geometry_type == "hashin" && d != 2)
    throw ValidationError("geometry.type = hashin needs a 2x2 pattern");
  if (!m.matrix_stiffness.empty()) {
    const std::size_t ns = d * (d + 1) / 2;
    if (m.matrix_stiffness.size() != ns)
      throw ValidationError("geometry.matrix_stiffness must be a " + std::to_string(ns) + "x" +
                            std::to_string(ns) + " Mandel matrix");
    for (const auto& r : m.matrix_stiffness)
      if (r.size() != ns) throw ValidationError("geometry.matrix_stiffness rows have wrong length");
  }
  if (m.strain.empty()) throw ValidationError("missing required field load.strain");
  const std::size_t ns = d * (d + 1) / 2;
  if (m.strain.size() != ns && m.strain.size() != d * d)
    throw ValidationError("load.strain needs " + std::to_string(ns) + " or " +
                          std::to_string(d * d) + " components");
  if (!(m.tolerance > 0.0)) throw ValidationError("solver.tolerance must be positive");
  if (m.max_iter <= 0) throw ValidationError("solver.max_iter must be positive");
  if (m.metric != "mean_stress" && m.metric != "literal")
    throw ValidationError("solver.metric must be mean_stress or literal");
  if (m.heatmap != "none" && m.heatmap != "e11" && m.heatmap != "elog")
    throw ValidationError("output.heatmap must be none, e11 or elog");
  if (m.heatmap != "none" && d != 2) throw ValidationError("output.heatmap needs a 2x2 pattern");
  if (m.width < 0 || m.height < 0 || (m.width == 0) != (m.height == 0))
    throw ValidationError("output.width and output.height must be given together and be positive");
}

inline Manifest parse_manifest_text(const std::string& text, const std::string& source = "<string>") {
  Manifest m;
  m.source = source;
  using Setter = void (*)(Manifest&, const std::string&, int);
  static const std::map<std::string, std::map<std::string, Setter>> keys{
      {"pattern",
       {{"matrix", [](Manifest& m, const std::string& v, int l) { m.pattern = detail::parse_rows<Integer>(v, l); }}}},
      {"kernel",
       {{"type", [](Manifest& m, const std::string& v, int) { m.kernel_type = v; }},
        {"alpha", [](Manifest& m, const std::string& v, int l) { m.alpha = detail::parse_list<double>(v, l); }},
        {"directions", [](Manifest& m, const std::string& v, int l) { m.directions = detail::parse_rows<double>(v, l); }},
        {"radius", [](Manifest& m, const std::string& v, int l) { m.radius = detail::parse_int(v, l); }}}},
      {"geometry",
       {{"type", [](Manifest& m, const std::string& v, int) { m.geometry_type = v; }},
        {"normal", [](Manifest& m, const std::string& v, int l) { m.normal = detail::parse_int(v, l); }},
        {"fraction", [](Manifest& m, const std::string& v, int l) { m.fraction = detail::parse_number<double>(v, l); }},
        {"phase1", [](Manifest& m, const std::string& v, int l) { m.phase1 = detail::parse_material(v, l); }},
        {"phase2", [](Manifest& m, const std::string& v, int l) { m.phase2 = detail::parse_material(v, l); }},
        {"material", [](Manifest& m, const std::string& v, int l) { m.material = detail::parse_material(v, l); }},
        {"c1", [](Manifest& m, const std::string& v, int l) { m.c1 = detail::parse_number<double>(v, l); }},
        {"c2", [](Manifest& m, const std::string& v, int l) { m.c2 = detail::parse_number<double>(v, l); }},
        {"rho", [](Manifest& m, const std::string& v, int l) { m.rho = detail::parse_number<double>(v, l); }},
        {"rotation", [](Manifest& m, const std::string& v, int l) { m.rotation = detail::parse_number<double>(v, l); }},
        {"core", [](Manifest& m, const std::string& v, int l) { m.core = detail::parse_material(v, l); }},
        {"coating", [](Manifest& m, const std::string& v, int l) { m.coating = detail::parse_material(v, l); }},
        {"matrix", [](Manifest& m, const std::string& v, int l) { m.matrix = detail::parse_material(v, l); }},
        {"matrix_stiffness",
         [](Manifest& m, const std::string& v, int l) { m.matrix_stiffness = detail::parse_rows<double>(v, l); }}}},
      {"load",
       {{"strain", [](Manifest& m, const std::string& v, int l) { m.strain = detail::parse_list<double>(v, l); }}}},
      {"solver",
       {{"tolerance", [](Manifest& m, const std::string& v, int l) { m.tolerance = detail::parse_number<double>(v, l); }},
        {"max_iter", [](Manifest& m, const std::string& v, int l) { m.max_iter = detail::parse_int(v, l); }},
        {"reference",
         [](Manifest& m, const std::string& v, int l) {
           if (v == "auto") {
             m.reference_lame.reset();
             return;
           }
           const auto xs = detail::parse_list<double>(v, l);
           if (xs.size() != 2) throw ParseError(l, "solver.reference must be auto or \"lambda mu\"");
           m.reference_lame = std::array<double, 2>{xs[0], xs[1]};
         }},
        {"metric", [](Manifest& m, const std::string& v, int) { m.metric = v; }}}},
      {"output",
       {{"directory", [](Manifest& m, const std::string& v, int) { m.output_dir = v; }},
        {"heatmap", [](Manifest& m, const std::string& v, int) { m.heatmap = v; }},
        {"width", [](Manifest& m, const std::string& v, int l) { m.width = detail::parse_int(v, l); }},
        {"height", [](Manifest& m, const std::string& v, int l) { m.height = detail::parse_int(v, l); }},
        {"colormap", [](Manifest& m, const std::string& v, int) { m.colormap = v; }},
        {"strain_csv", [](Manifest& m, const std::string& v, int l) { m.strain_csv = detail::parse_bool(v, l); }},
        {"phase_map", [](Manifest& m, const std::string& v, int l) { m.phase_map = detail::parse_bool(v, l); }},
        {"green_table", [](Manifest& m, const std::string& v, int l) { m.green_table = detail::parse_bool(v, l); }}}},
      {"reference",
       {{"pattern",
         [](Manifest& m, const std::string& v, int l) { m.reference_pattern = detail::parse_rows<Integer>(v, l); }}}},
      {"sweep",
       {{"alpha1", [](Manifest& m, const std::string& v, int l) { m.sweep_alpha1 = detail::parse_grid(v, l); }},
        {"alpha2", [](Manifest& m, const std::string& v, int l) { m.sweep_alpha2 = detail::parse_grid(v, l); }}}},
  };

  std::stringstream ss(text);
  std::string raw;
  std::string section;
  std::set<std::string> seen;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string s = detail::trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(line, "unterminated section header");
      section = detail::trim(std::string_view(s).substr(1, s.size() - 2));
      if (!keys.count(section)) throw ParseError(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value");
    if (section.empty()) throw ParseError(line, "key outside of a section");
    const std::string key = detail::trim(std::string_view(s).substr(0, eq));
    const std::string value = detail::unquote(detail::trim(std::string_view(s).substr(eq + 1)));
    const auto& table = keys.at(section);
    const auto it = table.find(key);
    if (it == table.end()) throw ParseError(line, "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(section + "." + key).second)
      throw ParseError(line, "duplicate key '" + key + "' in [" + section + "]");
    it->second(m, value, line);
  }
  validate(m);
  return m;
}

inline Manifest parse_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot read manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest_text(ss.str(), path.string());
}

}  // namespace lsts

#endif  // LSTS_MANIFEST_HPP
