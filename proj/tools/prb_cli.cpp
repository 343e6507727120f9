// prb: continuum solves, chain-model fits and parameter sweeps from the shell.
//
// Exit status: 0 success, 1 numerical failure, 2 usage or configuration error.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "prb/beam.hpp"
#include "prb/chain.hpp"
#include "prb/config.hpp"
#include "prb/digest.hpp"
#include "prb/fitter.hpp"
#include "prb/presets.hpp"
#include "prb/report_io.hpp"

namespace fs = std::filesystem;
using namespace prb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string preset;
  std::string config;
  std::string out;
  std::string dof;
  std::optional<std::size_t> grid_multiplier;
  std::optional<double> shooting_tolerance;
  std::optional<unsigned> threads;
  bool reduced = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_dof) {
  cmd->add_option("--preset", f.preset, fmt::format("Case-study preset ({})", fmt::join(preset_names(), ", ")));
  cmd->add_option("--config", f.config, "Configuration file ([beam], [grid], [run] sections)");
  cmd->add_option("--out", f.out, "Output directory (default: $PRB_OUT_DIR, else .)");
  cmd->add_option("--grid-multiplier", f.grid_multiplier, "Solver intervals per chain segment");
  cmd->add_option("--shooting-tolerance", f.shooting_tolerance, "Tip moment tolerance of the shooting solve, N*mm");
  cmd->add_option("--threads", f.threads, "Worker threads, 0 = all hardware threads");
  cmd->add_flag("--reduced", f.reduced, "Use the preset's reduced load grid");
  cmd->add_flag("-q,--quiet", f.quiet, "Do not print tables to stdout");
  if (with_dof) cmd->add_option("--dof", f.dof, "Comma-separated chain DoF list");
}

RunConfig resolve_config(const CommonFlags& f) {
  RunConfig c;
  if (!f.preset.empty()) {
    try {
      c = config_from_preset(find_preset(f.preset));
    } catch (const InvalidInput& e) {
      throw ConfigError(fmt::format("--preset: {}", e.what()));
    }
  }
  if (!f.config.empty()) {
    ConfigTable table = load_config_file(f.config);
    // The flag wins over a preset named in the file.
    if (!f.preset.empty() && table.count("beam")) table["beam"].erase("preset");
    c = apply_config(std::move(c), table);
  }
  if (f.preset.empty() && f.config.empty()) throw ConfigError("either --preset or --config is required");

  if (const char* env = std::getenv("PRB_OUT_DIR"); env && *env && c.out_dir == fs::path(".")) c.out_dir = env;
  if (!f.out.empty()) c.out_dir = f.out;
  if (!f.dof.empty()) c.dofs = parse_dof_list(f.dof, "--dof");
  if (f.grid_multiplier) c.grid_multiplier = *f.grid_multiplier;
  if (f.shooting_tolerance) c.shooting_tolerance = *f.shooting_tolerance;
  if (f.threads) c.threads = *f.threads;
  if (f.reduced) c.reduced = true;
  if (c.spec.length <= 0.0) throw ConfigError("beam length is not set");
  c.validate();
  return c;
}

// Digests that tie every artifact to the configuration that produced it.
Json provenance(const RunConfig& c) {
  Json j;
  j["label"] = c.label();
  if (c.preset) {
    const Preset p = find_preset(*c.preset);
    j["preset"] = p.name;
    j["preset_version"] = p.version;
    j["preset_digest"] = p.digest();
  }
  j["config_digest"] = c.digest();
  j["spec"] = c.spec.canonical();
  j["reduced_grid"] = c.reduced;
  j["grid_multiplier"] = c.grid_multiplier;
  j["shooting_tolerance"] = c.shooting_tolerance;
  return j;
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(const RunConfig& c) : dir_(c.out_dir), label_(c.label()) {}

  fs::path write(const std::string& suffix, const std::string& content) {
    const std::string name = fmt::format("{}_{}", label_, suffix);
    write_text_file(dir_ / name, content);
    files_[name] = short_digest(content);
    return dir_ / name;
  }

  void write_manifest(const std::string& command, const RunConfig& c) {
    Json j = provenance(c);
    j["command"] = command;
    j["files"] = Json::object();
    for (const auto& [name, digest] : files_) j["files"][name] = digest;
    write(fmt::format("{}_manifest.json", command), j.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  std::string label_;
  std::map<std::string, std::string> files_;
};

// Prints a CSV table aligned for the terminal.
void print_table(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::size_t width = 0;
  std::string line;
  for (char ch : csv) {
    if (ch == '\r') continue;
    if (ch == '\n') {
      auto& row = rows.emplace_back();
      std::size_t start = 0;
      for (std::size_t p; (p = line.find(',', start)) != std::string::npos; start = p + 1) row.push_back(line.substr(start, p - start));
      row.push_back(line.substr(start));
      for (const auto& cell : row) width = std::max(width, cell.size());
      line.clear();
    } else {
      line += ch;
    }
  }
  for (const auto& row : rows) {
    std::string out;
    for (const auto& cell : row) out += fmt::format("{:>{}}", cell, width + 2);
    fmt::print("{}\n", out);
  }
}

int cmd_solve(const CommonFlags& f, const std::string& wrench_text, std::optional<double> moment,
              std::size_t grid_count) {
  const RunConfig c = resolve_config(f);
  TipWrench w{};
  if (!wrench_text.empty()) w = parse_wrench(wrench_text, "--wrench");
  if (moment) w.mt = *moment;
  if (!std::isfinite(w.fx) || !std::isfinite(w.fy) || !std::isfinite(w.mt)) throw ConfigError("--wrench: non-finite value");
  if (grid_count < 1) throw ConfigError("--grid-count must be at least 1");

  SolverOptions opts;
  opts.tolerance = c.shooting_tolerance;
  const CenterlineSolution sol = solve_deflection(c.spec, w, grid_count, opts);

  ArtifactWriter out(c);
  const auto path = out.write("centerline.csv", centerline_csv(sol));
  out.write_manifest("solve", c);
  const TipPose tip = sol.tip();
  if (!f.quiet) {
    fmt::print("tip x = {:.6f} mm, y = {:.6f} mm, theta = {:.6f} rad (shooting residual {:.3g} N*mm, {} iterations)\n",
               tip.x, tip.y, tip.theta, sol.shooting_residual, sol.shooting_iterations);
    fmt::print("wrote {}\n", path.string());
  }
  return kExitOk;
}

int cmd_fit(const CommonFlags& f) {
  const RunConfig c = resolve_config(f);
  const LoadGrid grid(c.active_grid());
  const FitOptions options = c.fit_options();
  const Json prov = provenance(c);
  const ReportContext ctx{c.label(), c.preset ? find_preset(*c.preset).digest() : std::string{}, c.spec.canonical()};

  ArtifactWriter out(c);
  std::vector<DofColumn> columns;
  bool any_failed = false;
  for (std::size_t n : c.dofs) {
    DofColumn col;
    col.dof = n;
    try {
      FitReport report = make_report(fit(c.spec, n, grid, options), c.spec.length);
      col.stiffness = report.fit.model.stiffness;
      col.errors = report.errors;
      Json j = fit_report_to_json(report, ctx);
      j["config_digest"] = prov["config_digest"];
      j["grid"] = grid_to_json(grid);
      out.write(fmt::format("fit_{}dof.json", n), j.dump(2) + "\n");
      out.write(fmt::format("cases_{}dof.csv", n), cases_csv(report));
    } catch (const FitError& e) {
      col.failed = true;
      any_failed = true;
      if (e.joint()) fmt::print(stderr, "fit failed for {} DoF at joint {}: {}\n", n, *e.joint(), e.what());
      else fmt::print(stderr, "fit failed for {} DoF: {}\n", n, e.what());
    } catch (const std::runtime_error& e) {
      col.failed = true;
      any_failed = true;
      fmt::print(stderr, "fit failed for {} DoF: {}\n", n, e.what());
    }
    columns.push_back(std::move(col));
  }

  const std::string stiffness = stiffness_table_csv(columns);
  const std::string errors = error_table_csv(columns);
  out.write("stiffness.csv", stiffness);
  out.write("errors.csv", errors);
  out.write_manifest("fit", c);
  if (!f.quiet) {
    fmt::print("{}: stiffness, N*m/rad\n", c.label());
    print_table(stiffness);
    fmt::print("\n{}: errors, percent\n", c.label());
    print_table(errors);
  }
  return any_failed ? kExitNumerical : kExitOk;
}

int cmd_sweep_segments(const CommonFlags& f, std::optional<std::size_t> resolution) {
  RunConfig c = resolve_config(f);
  if (resolution) c.sweep_resolution = *resolution;
  c.validate();
  const auto rows = sweep_segment_combinations(c.spec, LoadGrid(c.active_grid()), c.sweep_resolution, c.fit_options());
  ArtifactWriter out(c);
  const std::string csv = segment_sweep_csv(rows);
  const auto path = out.write("segment_sweep.csv", csv);
  out.write_manifest("sweep_segments", c);
  if (!f.quiet) {
    print_table(csv);
    fmt::print("{} rows written to {}\n", rows.size(), path.string());
  }
  return kExitOk;
}

int cmd_sweep_length(const CommonFlags& f, const std::string& lengths_text) {
  RunConfig c = resolve_config(f);
  if (!lengths_text.empty()) c.sweep_lengths = parse_number_list(lengths_text, "--lengths");
  if (c.sweep_lengths.size() < 3) throw ConfigError("a length sweep needs at least 3 lengths (--lengths)");
  for (double s : c.sweep_lengths) {
    if (!(s > 0.0)) throw ConfigError(fmt::format("--lengths: {} is not a positive length", s));
  }
  const std::size_t n = c.dofs.front();
  const auto points = sweep_lengths(c.spec, n, c.sweep_lengths, LoadGrid(c.active_grid()), c.fit_options());

  std::vector<double> s, k1, k2;
  for (const auto& p : points) {
    s.push_back(p.length);
    k1.push_back(p.stiffness.at(0));
    k2.push_back(p.stiffness.size() > 1 ? p.stiffness[1] : p.stiffness[0]);
  }
  Json law = provenance(c);
  law["dof"] = n;
  law["stiffness_unit"] = "N*mm/rad";
  law["model"] = "k = kappa * S^-sigma";
  law["k1"] = power_law_to_json(power_law_fit(s, k1));
  law["k2"] = power_law_to_json(power_law_fit(s, k2));

  ArtifactWriter out(c);
  const std::string csv = length_sweep_csv(points);
  out.write("length_sweep.csv", csv);
  out.write("power_law.json", law.dump(2) + "\n");
  out.write_manifest("sweep_length", c);
  if (!f.quiet) {
    print_table(csv);
    fmt::print("k1: kappa = {:.6g}, sigma = {:.6f}, rms(log) = {:.3g}\n", law["k1"]["kappa"].get<double>(),
               law["k1"]["sigma"].get<double>(), law["k1"]["rms_log"].get<double>());
    fmt::print("k2: kappa = {:.6g}, sigma = {:.6f}, rms(log) = {:.3g}\n", law["k2"]["kappa"].get<double>(),
               law["k2"]["sigma"].get<double>(), law["k2"]["rms_log"].get<double>());
  }
  return kExitOk;
}

// Rebuilds the stiffness and error tables from fit JSON files.
int cmd_report(const std::vector<std::string>& files) {
  std::vector<DofColumn> columns;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw ConfigError(fmt::format("cannot read '{}'", file));
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(fmt::format("'{}': {}", file, e.what()));
    }
    DofColumn col;
    try {
      const PRBModel model = model_from_json(j.at("model"));
      col.dof = model.dof();
      col.stiffness = model.stiffness;
      const auto& e = j.at("errors_percent");
      auto opt = [](const Json& v) { return v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()); };
      col.errors.position.e_x = e.at("e_x").get<double>();
      col.errors.position.e_y = e.at("e_y").get<double>();
      col.errors.position.e_theta = e.at("e_theta").get<double>();
      col.errors.force.e_fx = opt(e.at("e_fx"));
      col.errors.force.e_fy = opt(e.at("e_fy"));
      col.errors.force.e_m = opt(e.at("e_m"));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(fmt::format("'{}' is not a fit report: {}", file, e.what()));
    } catch (const InvalidInput& e) {
      throw ConfigError(fmt::format("'{}': {}", file, e.what()));
    }
    columns.push_back(std::move(col));
  }
  std::stable_sort(columns.begin(), columns.end(), [](const auto& a, const auto& b) { return a.dof < b.dof; });
  fmt::print("stiffness, N*m/rad\n");
  print_table(stiffness_table_csv(columns));
  fmt::print("\nerrors, percent\n");
  print_table(error_table_csv(columns));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-rigid-body chain synthesis for highly flexible members"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string wrench_text;
  std::optional<double> moment;
  std::size_t grid_count = 1200;
  std::optional<std::size_t> resolution;
  std::string lengths_text;
  std::vector<std::string> report_files;

  auto* solve = app.add_subcommand("solve", "Solve the continuum member under one tip wrench; writes a centerline CSV");
  add_common(solve, flags, false);
  solve->add_option("--wrench", wrench_text, "Tip wrench fx,fy,mt in N, N, N*mm");
  solve->add_option("--moment", moment, "Tip moment in N*mm (overrides the wrench's mt)");
  solve->add_option("--grid-count", grid_count, "Solver intervals")->capture_default_str();

  auto* fit_cmd = app.add_subcommand("fit", "Fit chain models for each DoF; writes stiffness/error tables and fit JSON");
  add_common(fit_cmd, flags, true);

  auto* seg = app.add_subcommand("sweep-segments", "Fit 3-DoF chains over all segment length combinations");
  add_common(seg, flags, false);
  seg->add_option("--resolution", resolution, "Length steps per member length");

  auto* len = app.add_subcommand("sweep-length", "Fit chains over member lengths and a power law to k(S)");
  add_common(len, flags, true);
  len->add_option("--lengths", lengths_text, "Comma-separated member lengths, mm");

  auto* report = app.add_subcommand("report", "Print stiffness and error tables from fit JSON files");
  report->add_option("files", report_files, "Fit JSON files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(flags, wrench_text, moment, grid_count);
    if (*fit_cmd) return cmd_fit(flags);
    if (*seg) return cmd_sweep_segments(flags, resolution);
    if (*len) return cmd_sweep_length(flags, lengths_text);
    if (*report) return cmd_report(report_files);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const InvalidInput& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}
