#include "prb/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace prb {

namespace {

constexpr double kFlatAngle = 1e-9;

std::optional<double> normalized_mean(std::span<const FitCase> cases, double scale, auto component) {
  if (!(scale > 0.0)) return std::nullopt;
  double acc = 0.0;
  for (const auto& c : cases) acc += std::abs(component(c)) / scale;
  return 100.0 * acc / static_cast<double>(cases.size());
}

}  // namespace

PositionErrors position_errors(std::span<const FitCase> cases, double length, double rest_tip_angle) {
  if (cases.empty()) throw EmptyGrid("position errors need at least one load case");
  if (!(length > 0.0)) throw InvalidInput("normalizing length must be positive");

  PositionErrors out;
  out.length = length;
  out.theta_reference = std::abs(rest_tip_angle);
  if (out.theta_reference <= kFlatAngle) {
    double peak = 0.0;
    for (const auto& c : cases) peak = std::max(peak, std::abs(c.continuum_tip.theta));
    out.theta_reference = peak;
    out.theta_substituted = true;
  }

  double ex = 0.0, ey = 0.0, et = 0.0;
  for (const auto& c : cases) {
    ex += std::abs(c.continuum_tip.x - c.prb_tip.x);
    ey += std::abs(c.continuum_tip.y - c.prb_tip.y);
    et += std::abs(c.continuum_tip.theta - c.prb_tip.theta);
  }
  const auto n = static_cast<double>(cases.size());
  out.e_x = 100.0 * ex / (n * length);
  out.e_y = 100.0 * ey / (n * length);
  // A grid that never rotates the tip has zero angle error by construction.
  out.e_theta = out.theta_reference > 0.0 ? 100.0 * et / (n * out.theta_reference) : 0.0;
  return out;
}

ForceErrors force_errors(std::span<const FitCase> cases) {
  if (cases.empty()) throw EmptyGrid("force errors need at least one load case");
  ForceErrors out;
  for (const auto& c : cases) {
    out.max_fx = std::max(out.max_fx, std::abs(c.wrench.fx));
    out.max_fy = std::max(out.max_fy, std::abs(c.wrench.fy));
    out.max_mt = std::max(out.max_mt, std::abs(c.wrench.mt));
  }
  out.e_fx = normalized_mean(cases, out.max_fx, [](const FitCase& c) { return c.wrench.fx - c.estimate.wrench.fx; });
  out.e_fy = normalized_mean(cases, out.max_fy, [](const FitCase& c) { return c.wrench.fy - c.estimate.wrench.fy; });
  out.e_m = normalized_mean(cases, out.max_mt, [](const FitCase& c) { return c.wrench.mt - c.estimate.wrench.mt; });
  return out;
}

ErrorReport error_report(std::span<const FitCase> cases, double length, double rest_tip_angle) {
  return {position_errors(cases, length, rest_tip_angle), force_errors(cases), cases.size()};
}

}  // namespace prb
