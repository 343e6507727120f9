#include "prb/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "prb/digest.hpp"

namespace prb {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, std::string_view delims) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find_first_of(delims, start);
    const auto piece = trim(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (!piece.empty()) out.push_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", what, text));
  }
  return v;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  const double v = parse_number(text, what);
  if (v < 0.0 || v != std::floor(v)) throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", what, text));
  return static_cast<std::size_t>(v);
}

bool parse_bool(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", what, text));
}

// "kind p1 p2 ..." or "tabulated s0:v0, s1:v1, ..."
std::pair<std::string, std::vector<std::string_view>> split_profile(std::string_view text, std::string_view what) {
  text = trim(text);
  const std::size_t sp = text.find_first_of(" \t");
  if (sp == std::string_view::npos) throw ConfigError(fmt::format("{}: expected '<kind> <parameters>'", what));
  return {std::string(text.substr(0, sp)), split(text.substr(sp + 1), " \t,")};
}

std::pair<std::vector<double>, std::vector<double>> parse_table(const std::vector<std::string_view>& pairs,
                                                                std::string_view what) {
  std::vector<double> s, v;
  for (auto p : pairs) {
    const auto colon = p.find(':');
    if (colon == std::string_view::npos) throw ConfigError(fmt::format("{}: table entry '{}' is not s:value", what, p));
    s.push_back(parse_number(p.substr(0, colon), what));
    v.push_back(parse_number(p.substr(colon + 1), what));
  }
  return {s, v};
}

std::vector<double> numbers(const std::vector<std::string_view>& parts, std::size_t expected, std::string_view what) {
  if (parts.size() != expected) throw ConfigError(fmt::format("{}: expected {} parameters, got {}", what, expected, parts.size()));
  std::vector<double> out;
  for (auto p : parts) out.push_back(parse_number(p, what));
  return out;
}

AxisRange parse_axis(std::string_view text, std::string_view what) {
  const auto parts = split(text, " \t,");
  if (parts.size() != 3) throw ConfigError(fmt::format("{}: expected 'min max count'", what));
  return {parse_number(parts[0], what), parse_number(parts[1], what), parse_count(parts[2], what)};
}

template <typename F>
auto rethrow_as_config(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const InvalidInput& e) {
    throw ConfigError(fmt::format("{}: {}", what, e.what()));
  }
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (auto p : split(text, ", \t")) out.push_back(parse_number(p, what));
  if (out.empty()) throw ConfigError(fmt::format("{}: empty list", what));
  return out;
}

std::vector<std::size_t> parse_dof_list(std::string_view text, std::string_view what) {
  std::vector<std::size_t> out;
  for (auto p : split(text, ", \t")) {
    const std::size_t n = parse_count(p, what);
    if (n < 1 || n > 1000) throw ConfigError(fmt::format("{}: DoF {} outside [1, 1000]", what, n));
    out.push_back(n);
  }
  if (out.empty()) throw ConfigError(fmt::format("{}: empty list", what));
  return out;
}

TipWrench parse_wrench(std::string_view text, std::string_view what) {
  const auto parts = split(text, ",");
  if (parts.size() != 3) throw ConfigError(fmt::format("{}: expected 'fx,fy,mt', got '{}'", what, text));
  return {parse_number(parts[0], what), parse_number(parts[1], what), parse_number(parts[2], what)};
}

StiffnessProfile parse_stiffness(std::string_view text, double length, std::string_view what) {
  const auto [kind, parts] = split_profile(text, what);
  return rethrow_as_config(what, [&, &kind = kind, &parts = parts] {
    if (kind == "constant") return StiffnessProfile::constant(numbers(parts, 1, what)[0]);
    if (kind == "linear") {
      const auto v = numbers(parts, 2, what);
      return StiffnessProfile::linear(v[0], v[1], length);
    }
    if (kind == "tabulated") {
      auto [s, v] = parse_table(parts, what);
      return StiffnessProfile::tabulated(std::move(s), std::move(v));
    }
    throw ConfigError(fmt::format("{}: unknown stiffness kind '{}'", what, kind));
  });
}

CurvatureProfile parse_curvature(std::string_view text, double length, std::string_view what) {
  const auto [kind, parts] = split_profile(text, what);
  return rethrow_as_config(what, [&, &kind = kind, &parts = parts] {
    if (kind == "constant") return CurvatureProfile::constant(numbers(parts, 1, what)[0]);
    if (kind == "linear") {
      const auto v = numbers(parts, 2, what);
      return CurvatureProfile::linear(v[0], v[1], length);
    }
    if (kind == "linear_radius") {
      const auto v = numbers(parts, 2, what);
      return CurvatureProfile::linear_radius(v[0], v[1], length);
    }
    if (kind == "tabulated") {
      auto [s, v] = parse_table(parts, what);
      return CurvatureProfile::tabulated(std::move(s), std::move(v));
    }
    throw ConfigError(fmt::format("{}: unknown curvature kind '{}'", what, kind));
  });
}

FitOptions RunConfig::fit_options() const {
  FitOptions o;
  o.grid_multiplier = grid_multiplier;
  o.solver.tolerance = shooting_tolerance;
  o.threads = threads;
  return o;
}

std::string RunConfig::digest() const {
  std::string text = fmt::format("{};grid={}", spec.canonical(), LoadGrid(active_grid()).canonical());
  if (preset) text = fmt::format("preset={};{}", *preset, text);
  return short_digest(text);
}

void RunConfig::validate() const {
  rethrow_as_config("beam", [&] {
    spec.validate();
    return 0;
  });
  rethrow_as_config("grid", [&] { return LoadGrid(active_grid()).size(); });
  if (dofs.empty()) throw ConfigError("at least one DoF is required");
  for (std::size_t n : dofs) {
    if (n < 1 || n > 1000) throw ConfigError(fmt::format("DoF {} outside [1, 1000]", n));
  }
  if (grid_multiplier < 2 || grid_multiplier > 10000) {
    throw ConfigError(fmt::format("grid multiplier {} outside [2, 10000]", grid_multiplier));
  }
  if (!(shooting_tolerance > 0.0) || shooting_tolerance > 1e-3) {
    throw ConfigError(fmt::format("shooting tolerance {} outside (0, 1e-3]", shooting_tolerance));
  }
  if (sweep_resolution < 3 || sweep_resolution > 200) {
    throw ConfigError(fmt::format("sweep resolution {} outside [3, 200]", sweep_resolution));
  }
}

RunConfig config_from_preset(const Preset& preset) {
  RunConfig c;
  c.preset = preset.name;
  c.spec = preset.spec;
  c.grid = preset.grid;
  c.reduced_grid = preset.reduced_grid;
  c.dofs = preset.dofs;
  c.sweep_resolution = preset.sweep_resolution;
  c.sweep_lengths = preset.sweep_lengths;
  return c;
}

ConfigTable parse_config_text(std::string_view text) {
  ConfigTable table;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(fmt::format("config line {}: unterminated section header", line_no));
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("config line {}: expected 'key = value'", line_no));
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("config line {}: empty key", line_no));
    table[section][std::string(key)] = std::string(value);
  }
  return table;
}

ConfigTable load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig apply_config(RunConfig c, const ConfigTable& table) {
  static const std::map<std::string, std::vector<std::string>> kKnown{
      {"beam", {"preset", "length_mm", "stiffness", "curvature"}},
      {"grid", {"kind", "axis0", "axis1", "axis2", "reduced"}},
      {"run", {"dof", "grid_multiplier", "shooting_tolerance", "sweep_resolution", "sweep_lengths", "threads", "out"}},
  };
  for (const auto& [section, entries] : table) {
    const auto known = kKnown.find(section);
    if (known == kKnown.end()) throw ConfigError(fmt::format("unknown config section [{}]", section));
    for (const auto& [key, value] : entries) {
      if (std::find(known->second.begin(), known->second.end(), key) == known->second.end()) {
        throw ConfigError(fmt::format("unknown key '{}' in [{}]", key, section));
      }
    }
  }

  auto get = [&](const std::string& section, const std::string& key) -> const std::string* {
    const auto s = table.find(section);
    if (s == table.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };

  if (const auto* v = get("beam", "preset")) {
    c = rethrow_as_config("beam.preset", [&] { return config_from_preset(find_preset(*v)); });
  }
  if (const auto* v = get("beam", "length_mm")) {
    const double length = parse_number(*v, "beam.length_mm");
    if (!(length > 0.0)) throw ConfigError("beam.length_mm must be positive");
    if (c.spec.length > 0.0) {
      c.spec = rethrow_as_config("beam.length_mm", [&] { return c.spec.resized(length); });
    } else {
      c.spec.length = length;
    }
    c.preset.reset();
  }
  if (const auto* v = get("beam", "stiffness")) {
    c.spec.stiffness = parse_stiffness(*v, c.spec.length, "beam.stiffness");
    c.preset.reset();
  }
  if (const auto* v = get("beam", "curvature")) {
    c.spec.curvature = parse_curvature(*v, c.spec.length, "beam.curvature");
    c.preset.reset();
  }

  bool grid_changed = false;
  if (const auto* v = get("grid", "kind")) {
    if (*v == "box") c.grid.kind = LoadGridSpec::Kind::Box;
    else if (*v == "polar") c.grid.kind = LoadGridSpec::Kind::Polar;
    else throw ConfigError(fmt::format("grid.kind: '{}' is neither box nor polar", *v));
    grid_changed = true;
  }
  for (std::size_t a = 0; a < 3; ++a) {
    const std::string key = fmt::format("axis{}", a);
    if (const auto* v = get("grid", key)) {
      c.grid.axes[a] = parse_axis(*v, "grid." + key);
      grid_changed = true;
    }
  }
  if (grid_changed) {
    // An explicit grid replaces the preset's reduced variant too.
    c.reduced_grid = c.grid;
    c.preset.reset();
  }
  if (const auto* v = get("grid", "reduced")) c.reduced = parse_bool(*v, "grid.reduced");

  if (const auto* v = get("run", "dof")) c.dofs = parse_dof_list(*v, "run.dof");
  if (const auto* v = get("run", "grid_multiplier")) c.grid_multiplier = parse_count(*v, "run.grid_multiplier");
  if (const auto* v = get("run", "shooting_tolerance")) c.shooting_tolerance = parse_number(*v, "run.shooting_tolerance");
  if (const auto* v = get("run", "sweep_resolution")) c.sweep_resolution = parse_count(*v, "run.sweep_resolution");
  if (const auto* v = get("run", "sweep_lengths")) c.sweep_lengths = parse_number_list(*v, "run.sweep_lengths");
  if (const auto* v = get("run", "threads")) c.threads = static_cast<unsigned>(parse_count(*v, "run.threads"));
  if (const auto* v = get("run", "out")) c.out_dir = *v;
  return c;
}

}  // namespace prb
