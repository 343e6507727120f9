#include "prb/report_io.hpp"

#include <fstream>

#include <fmt/format.h>

#include "prb/digest.hpp"

namespace prb {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string full(double v) { return fmt::format("{:.12g}", v); }

std::string optional_fixed(const std::optional<double>& v) { return v ? fixed(*v) : std::string("N/A"); }

template <typename T>
std::vector<T> read_array(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw InvalidInput(fmt::format("model JSON lacks array '{}'", key));
  return j.at(key).get<std::vector<T>>();
}

}  // namespace

std::string fixed(double v, int decimals) { return fmt::format("{:.{}f}", v, decimals); }

Json model_to_json(const PRBModel& model) {
  Json j;
  j["n"] = model.dof();
  j["lengths_mm"] = model.lengths;
  j["stiffness_Nmm_per_rad"] = model.stiffness;
  j["rest_angles_rad"] = model.rest_angles;
  j["tip_offset_rad"] = model.tip_offset;
  j["source_spec_digest"] = model.source_digest;
  return j;
}

PRBModel model_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("model JSON must be an object");
  PRBModel m;
  try {
    m.lengths = read_array<double>(j, "lengths_mm");
    m.stiffness = read_array<double>(j, "stiffness_Nmm_per_rad");
    m.rest_angles = read_array<double>(j, "rest_angles_rad");
    m.tip_offset = j.at("tip_offset_rad").get<double>();
    m.source_digest = j.value("source_spec_digest", std::string{});
    if (j.at("n").get<std::size_t>() != m.lengths.size()) throw InvalidInput("model JSON 'n' disagrees with its arrays");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(fmt::format("malformed model JSON: {}", e.what()));
  }
  m.validate();
  return m;
}

Json grid_to_json(const LoadGrid& grid) {
  const auto& spec = grid.spec();
  const bool box = spec.kind == LoadGridSpec::Kind::Box;
  static constexpr const char* kBoxAxes[] = {"fx_N", "fy_N", "mt_Nmm"};
  static constexpr const char* kPolarAxes[] = {"f_N", "psi_rad", "mt_Nmm"};
  Json j;
  j["kind"] = box ? "box" : "polar";
  Json axes = Json::array();
  for (std::size_t a = 0; a < 3; ++a) {
    const auto& ax = spec.axes[a];
    axes.push_back({{"name", box ? kBoxAxes[a] : kPolarAxes[a]}, {"min", ax.min}, {"max", ax.max}, {"count", ax.count}});
  }
  j["axes"] = axes;
  j["cases"] = grid.size();
  j["digest"] = short_digest(grid.canonical());
  return j;
}

Json fit_report_to_json(const FitReport& report, const ReportContext& ctx) {
  const auto& model = report.fit.model;
  const auto& pos = report.errors.position;
  const auto& frc = report.errors.force;

  Json j;
  j["label"] = ctx.label;
  j["preset_digest"] = ctx.preset_digest;
  j["spec"] = ctx.spec_canonical;
  j["source_spec_digest"] = model.source_digest;
  j["dof"] = model.dof();
  j["grid_count"] = report.fit.grid_count;
  j["model"] = model_to_json(model);

  std::vector<double> k_nm;
  for (double k : model.stiffness) k_nm.push_back(to_newton_meter(k));
  j["stiffness_Nm_per_rad"] = k_nm;

  j["force_cost"] = {{"norm", "mean over cases of squared euclidean norm, (N*mm)^2"},
                     {"E_f", report.force.total},
                     {"per_joint", report.force.per_joint}};
  j["position_cost"] = {{"norm", "mean over cases of squared euclidean norm of [x, y, theta]"},
                        {"E_x", report.position.combined},
                        {"mean_position_mm", report.position.position},
                        {"mean_angle_rad", report.position.angle}};
  j["errors_percent"] = {{"e_x", pos.e_x},        {"e_y", pos.e_y},
                         {"e_theta", pos.e_theta}, {"e_fx", optional_number(frc.e_fx)},
                         {"e_fy", optional_number(frc.e_fy)}, {"e_m", optional_number(frc.e_m)}};
  j["normalizers"] = {{"length_mm", pos.length},
                      {"theta_reference_rad", pos.theta_reference},
                      {"theta_reference_substituted", pos.theta_substituted},
                      {"max_abs_fx_N", frc.max_fx},
                      {"max_abs_fy_N", frc.max_fy},
                      {"max_abs_mt_Nmm", frc.max_mt}};

  std::size_t singular = 0;
  for (const auto& c : report.fit.cases) singular += c.estimate.singular ? 1 : 0;
  j["cases"] = report.fit.cases.size();
  j["singular_cases"] = singular;
  j["rest_tip_angle_rad"] = report.fit.rest_tip_angle;
  return j;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += "\r\n";
  return out;
}

std::string centerline_csv(const CenterlineSolution& sol) {
  std::string out = csv_row({"s_mm", "theta_rad", "moment_Nmm", "x_mm", "y_mm"});
  for (std::size_t j = 0; j <= sol.grid_count; ++j) {
    out += csv_row({fixed(sol.arc(j), 9), fixed(sol.theta[j], 9), full(sol.moment[j]), fixed(sol.x[j], 9),
                    fixed(sol.y[j], 9)});
  }
  return out;
}

std::string cases_csv(const FitReport& report) {
  const auto& model = report.fit.model;
  std::string out = csv_row({"q", "fx_N", "fy_N", "mt_Nmm", "x_t", "y_t", "theta_t", "x_hat", "y_hat", "theta_hat",
                             "fx_hat", "fy_hat", "mt_hat", "force_residual", "singular"});
  std::size_t q = 0;
  for (const auto& c : report.fit.cases) {
    double residual = 0.0;
    for (std::size_t i = 0; i < model.dof(); ++i) {
      const double r = model.stiffness[i] * c.delta_phi[i] - c.torque(static_cast<Eigen::Index>(i));
      residual += r * r;
    }
    out += csv_row({std::to_string(q++), full(c.wrench.fx), full(c.wrench.fy), full(c.wrench.mt),
                    full(c.continuum_tip.x), full(c.continuum_tip.y), full(c.continuum_tip.theta), full(c.prb_tip.x),
                    full(c.prb_tip.y), full(c.prb_tip.theta), full(c.estimate.wrench.fx), full(c.estimate.wrench.fy),
                    full(c.estimate.wrench.mt), full(residual), c.estimate.singular ? "1" : "0"});
  }
  return out;
}

std::string stiffness_table_csv(const std::vector<DofColumn>& columns) {
  std::vector<std::string> header{"joint"};
  std::size_t rows = 0;
  for (const auto& c : columns) {
    header.push_back(fmt::format("dof{}", c.dof));
    rows = std::max(rows, c.dof);
  }
  std::string out = csv_row(header);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<std::string> row{fmt::format("k{}", i + 1)};
    for (const auto& c : columns) {
      if (c.failed) row.emplace_back("FAILED");
      else if (i < c.stiffness.size()) row.push_back(fixed(to_newton_meter(c.stiffness[i])));
      else row.emplace_back("N/A");
    }
    out += csv_row(row);
  }
  return out;
}

std::string error_table_csv(const std::vector<DofColumn>& columns) {
  std::vector<std::string> header{"metric"};
  for (const auto& c : columns) header.push_back(fmt::format("dof{}", c.dof));
  std::string out = csv_row(header);

  using Getter = std::optional<double> (*)(const ErrorReport&);
  const std::pair<const char*, Getter> metrics[] = {
      {"e_x", [](const ErrorReport& e) -> std::optional<double> { return e.position.e_x; }},
      {"e_y", [](const ErrorReport& e) -> std::optional<double> { return e.position.e_y; }},
      {"e_theta", [](const ErrorReport& e) -> std::optional<double> { return e.position.e_theta; }},
      {"e_fx", [](const ErrorReport& e) { return e.force.e_fx; }},
      {"e_fy", [](const ErrorReport& e) { return e.force.e_fy; }},
      {"e_m", [](const ErrorReport& e) { return e.force.e_m; }},
  };
  for (const auto& [name, get] : metrics) {
    std::vector<std::string> row{name};
    for (const auto& c : columns) row.push_back(c.failed ? std::string("FAILED") : optional_fixed(get(c.errors)));
    out += csv_row(row);
  }
  return out;
}

std::string segment_sweep_csv(const std::vector<SegmentSweepRow>& rows) {
  std::string out = csv_row({"l1", "l2", "l3", "k1", "k2", "k3", "ex", "ey", "etheta", "efx", "efy", "em"});
  for (const auto& r : rows) {
    const auto& p = r.errors.position;
    const auto& f = r.errors.force;
    out += csv_row({fixed(r.lengths[0]), fixed(r.lengths[1]), fixed(r.lengths[2]),
                    fixed(to_newton_meter(r.stiffness[0])), fixed(to_newton_meter(r.stiffness[1])),
                    fixed(to_newton_meter(r.stiffness[2])), fixed(p.e_x), fixed(p.e_y), fixed(p.e_theta),
                    optional_fixed(f.e_fx), optional_fixed(f.e_fy), optional_fixed(f.e_m)});
  }
  return out;
}

std::string length_sweep_csv(const std::vector<LengthSweepPoint>& points) {
  std::string out = csv_row({"length_mm", "k1", "k2"});
  for (const auto& p : points) {
    out += csv_row({fixed(p.length), full(to_newton_meter(p.stiffness.at(0))),
                    full(to_newton_meter(p.stiffness.size() > 1 ? p.stiffness[1] : p.stiffness[0]))});
  }
  return out;
}

Json power_law_to_json(const PowerLawFit& fit) {
  return {{"kappa", fit.kappa}, {"sigma", fit.sigma}, {"rms_log", fit.rms}, {"points", fit.used}, {"rejected", fit.rejected}};
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace prb
