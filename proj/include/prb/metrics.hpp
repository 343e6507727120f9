#pragma once

// Normalized percentage errors of a chain model over a load grid.

#include <optional>
#include <span>
#include <stdexcept>

#include "prb/fit_case.hpp"

namespace prb {

struct PositionErrors {
  double e_x = 0.0;
  double e_y = 0.0;
  double e_theta = 0.0;
  double length = 0.0;           // normalizer for e_x, e_y
  double theta_reference = 0.0;  // normalizer for e_theta
  // True when the rest tip angle was ~0 and max |theta_t| over the grid was used instead.
  bool theta_substituted = false;
};

struct ForceErrors {
  // nullopt when that wrench component is identically zero over the grid.
  std::optional<double> e_fx;
  std::optional<double> e_fy;
  std::optional<double> e_m;
  double max_fx = 0.0;
  double max_fy = 0.0;
  double max_mt = 0.0;
};

struct ErrorReport {
  PositionErrors position;
  ForceErrors force;
  std::size_t cases = 0;
};

class EmptyGrid : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

PositionErrors position_errors(std::span<const FitCase> cases, double length, double rest_tip_angle);

// Uses FitCase::estimate, which must already be populated.
ForceErrors force_errors(std::span<const FitCase> cases);

ErrorReport error_report(std::span<const FitCase> cases, double length, double rest_tip_angle);

}  // namespace prb
