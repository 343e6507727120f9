#pragma once

#include <vector>

#include "prb/beam.hpp"
#include "prb/chain.hpp"

namespace prb {

// Per-load-case data gathered during a fit.
struct FitCase {
  TipWrench wrench;
  JointState state;                // loaded joint angles
  std::vector<double> delta_phi;   // state minus rest joint angles
  Jacobian jacobian;               // at the loaded configuration
  Eigen::VectorXd torque;          // J^T w
  TipPose continuum_tip;
  TipPose prb_tip;
  WrenchEstimate estimate;         // filled once stiffness is known
};

}  // namespace prb
