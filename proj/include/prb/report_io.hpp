#pragma once

// JSON and CSV emission for models, fit reports and sweeps. Output is a pure
// function of the in-memory results, so reruns produce identical bytes.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "prb/beam.hpp"
#include "prb/chain.hpp"
#include "prb/fitter.hpp"

namespace prb {

using Json = nlohmann::ordered_json;

// N*mm/rad -> N*m/rad, the unit of the printed stiffness tables.
inline double to_newton_meter(double k_nmm) { return k_nmm / 1000.0; }

Json model_to_json(const PRBModel& model);
// Throws InvalidInput for missing fields or an inconsistent model.
PRBModel model_from_json(const Json& j);

Json grid_to_json(const LoadGrid& grid);

struct ReportContext {
  std::string label;          // preset name or "custom"
  std::string preset_digest;  // empty when not built from a preset
  std::string spec_canonical;
};

Json fit_report_to_json(const FitReport& report, const ReportContext& ctx);

// RFC 4180 field quoting.
std::string csv_field(std::string_view text);
std::string csv_row(const std::vector<std::string>& fields);

std::string centerline_csv(const CenterlineSolution& sol);
std::string cases_csv(const FitReport& report);

// One column per DoF; "N/A" where a model has no such joint. Stiffness in N*m/rad.
struct DofColumn {
  std::size_t dof = 0;
  bool failed = false;
  std::vector<double> stiffness;  // N*mm/rad
  ErrorReport errors;
};
std::string stiffness_table_csv(const std::vector<DofColumn>& columns);
std::string error_table_csv(const std::vector<DofColumn>& columns);

std::string segment_sweep_csv(const std::vector<SegmentSweepRow>& rows);
std::string length_sweep_csv(const std::vector<LengthSweepPoint>& points);
Json power_law_to_json(const PowerLawFit& fit);

// Formats with a fixed number of decimals.
std::string fixed(double v, int decimals = 4);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace prb
