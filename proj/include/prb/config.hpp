#pragma once

// Run configuration: preset defaults, then a sectioned key = value file, then
// command-line overrides.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prb/beam.hpp"
#include "prb/fitter.hpp"
#include "prb/presets.hpp"

namespace prb {

// Usage or configuration problem; the CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<std::string> preset;
  BeamSpec spec;
  LoadGridSpec grid;
  LoadGridSpec reduced_grid;
  bool reduced = false;
  std::vector<std::size_t> dofs;
  std::size_t grid_multiplier = 120;
  double shooting_tolerance = 1e-10;
  std::size_t sweep_resolution = 12;
  std::vector<double> sweep_lengths;
  unsigned threads = 0;
  std::filesystem::path out_dir = ".";

  std::string label() const { return preset.value_or("custom"); }
  const LoadGridSpec& active_grid() const { return reduced ? reduced_grid : grid; }
  FitOptions fit_options() const;
  // Digest of spec + active grid (+ preset name/version when present).
  std::string digest() const;
  void validate() const;
};

RunConfig config_from_preset(const Preset& preset);

// section -> key -> raw value
using ConfigTable = std::map<std::string, std::map<std::string, std::string>>;

ConfigTable parse_config_text(std::string_view text);
ConfigTable load_config_file(const std::filesystem::path& path);

// Applies a parsed table on top of `base`. A [beam] preset key resets the base first.
RunConfig apply_config(RunConfig base, const ConfigTable& table);

// Value parsers shared by the config file and CLI flags. `what` names the
// flag or key in diagnostics.
std::vector<double> parse_number_list(std::string_view text, std::string_view what);
std::vector<std::size_t> parse_dof_list(std::string_view text, std::string_view what);
TipWrench parse_wrench(std::string_view text, std::string_view what);
StiffnessProfile parse_stiffness(std::string_view text, double length, std::string_view what);
CurvatureProfile parse_curvature(std::string_view text, double length, std::string_view what);

}  // namespace prb
