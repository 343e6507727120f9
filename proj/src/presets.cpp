#include "prb/presets.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "prb/digest.hpp"

namespace prb {

namespace {

constexpr double kCatheterLength = 50.0;      // mm
constexpr double kCatheterModulus = 350.0;    // N/mm^2
constexpr double kCatheterInertia = 4.91e-2;  // mm^4

constexpr double kCtrModulus = 71000.0;  // N/mm^2
constexpr double kCtrInnerId = 0.203;    // mm
constexpr double kCtrInnerOd = 0.406;    // mm
constexpr double kCtrRadius = 27.0;      // mm
constexpr double kCtrLength = 27.0;      // mm

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// +/-4 mN in both force components, +/-250 mN*mm tip moment.
LoadGridSpec catheter_grid(std::size_t nfx, std::size_t nfy, std::size_t nm) {
  return {LoadGridSpec::Kind::Box, {AxisRange{-0.004, 0.004, nfx}, AxisRange{-0.004, 0.004, nfy}, AxisRange{-0.25, 0.25, nm}}};
}

// 0..7.5 mN in every direction, 0..200 mN*mm tip moment.
LoadGridSpec ctr_grid(std::size_t nf, std::size_t npsi, std::size_t nm, double scale = 1.0) {
  return {LoadGridSpec::Kind::Polar,
          {AxisRange{0.0, 0.0075 * scale, nf}, AxisRange{0.0, kTwoPi, npsi}, AxisRange{0.0, 0.2 * scale, nm}}};
}

BeamSpec catheter_spec() {
  return {kCatheterLength, StiffnessProfile::constant(catheter_flexural_rigidity()), CurvatureProfile::straight()};
}

BeamSpec ctr_spec() {
  return {kCtrLength, StiffnessProfile::constant(ctr_inner_flexural_rigidity()),
          CurvatureProfile::constant(1.0 / kCtrRadius)};
}

const std::vector<std::size_t> kStandardDofs{3, 4, 10, 15, 20};

}  // namespace

double catheter_flexural_rigidity() { return kCatheterModulus * kCatheterInertia; }

double ctr_inner_flexural_rigidity() {
  const double inertia = std::numbers::pi * (std::pow(kCtrInnerOd, 4) - std::pow(kCtrInnerId, 4)) / 64.0;
  return kCtrModulus * inertia;
}

std::string Preset::digest() const {
  return short_digest(fmt::format("preset={};version={};{};grid={}", name, version, spec.canonical(),
                                  LoadGrid(grid).canonical()));
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"catheter", "catheter_nonuniform_ei", "ctr_inner",
                                              "ctr_variable_curvature", "ctr_variable_length"};
  return names;
}

Preset find_preset(std::string_view name) {
  Preset p;
  p.name = std::string(name);

  if (name == "catheter") {
    p.spec = catheter_spec();
    p.grid = catheter_grid(11, 31, 10);  // 3410 cases
    p.reduced_grid = catheter_grid(5, 9, 5);
    p.dofs = kStandardDofs;
    p.notes = "straight catheter, EI = 350 MPa * 4.91e-2 mm^4 = 17.185 N*mm^2, S = 50 mm";
  } else if (name == "catheter_nonuniform_ei") {
    const double ei = catheter_flexural_rigidity();
    p.spec = {kCatheterLength, StiffnessProfile::linear(ei, 0.5 * ei, kCatheterLength), CurvatureProfile::straight()};
    p.grid = catheter_grid(11, 31, 10);
    p.reduced_grid = catheter_grid(5, 9, 5);
    p.dofs = kStandardDofs;
    p.notes = "straight catheter, EI(s) = EI (1 - s / 2S)";
  } else if (name == "ctr_inner") {
    p.spec = ctr_spec();
    p.grid = ctr_grid(11, 31, 20);  // 6820 cases
    p.reduced_grid = ctr_grid(5, 9, 5);
    p.dofs = kStandardDofs;
    p.notes = "CTR inner tube, R = 27 mm, S = 27 mm, EI = 71 GPa * pi (0.406^4 - 0.203^4) / 64";
  } else if (name == "ctr_variable_curvature") {
    p.spec = {kCtrLength, StiffnessProfile::constant(ctr_inner_flexural_rigidity()),
              CurvatureProfile::linear_radius(27.0, 9.0, kCtrLength)};
    p.grid = ctr_grid(11, 31, 20);
    p.reduced_grid = ctr_grid(5, 9, 5);
    p.dofs = kStandardDofs;
    p.notes = "CTR inner tube with radius varying linearly from 27 mm at the base to 9 mm at the tip";
  } else if (name == "ctr_variable_length") {
    p.spec = ctr_spec();
    // Tenth of the CTR load range: the near-linear regime of the length study.
    p.grid = ctr_grid(3, 9, 3, 0.1);
    p.reduced_grid = ctr_grid(2, 5, 2, 0.1);
    p.dofs = {30};
    p.sweep_lengths = {12.0, 15.0, 18.0, 21.0, 24.0, 27.0};
    p.notes = "CTR inner tube at variable total length, fixed DoF";
  } else {
    throw InvalidInput(fmt::format("unknown preset '{}' (known: {})", name, fmt::join(preset_names(), ", ")));
  }
  return p;
}

}  // namespace prb
