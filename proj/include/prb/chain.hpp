#pragma once

// Serial chain of rigid segments joined by torsional springs: kinematics,
// Jacobian, static force mapping and joint angles extracted from a centerline.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "prb/beam.hpp"

namespace prb {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// J^T does not have full column rank 3, so the tip wrench is unobservable.
class SingularConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Jacobian = Eigen::Matrix<double, 3, Eigen::Dynamic>;

struct PRBModel {
  std::vector<double> lengths;      // mm
  std::vector<double> stiffness;    // N*mm/rad
  std::vector<double> rest_angles;  // relative joint angles at no load, rad
  double tip_offset = 0.0;          // continuum minus chain tip angle at no load, rad
  std::string source_digest;

  std::size_t dof() const { return lengths.size(); }
  // Throws InvalidInput on non-positive lengths/stiffness or size mismatch.
  void validate() const;
};

// Relative joint angles; phi[0] is measured from the x axis.
struct JointState {
  std::vector<double> phi;

  std::size_t dof() const { return phi.size(); }
  // theta_j = phi_1 + ... + phi_j
  std::vector<double> absolute_angles() const;
};

// Chord angles atan2(dy, dx) between consecutive points.
std::vector<double> segment_angles(std::span<const CenterlinePoint> points);

// Inverse of the partial-sum map: phi_1 = theta_1, phi_i = theta_i - theta_{i-1}.
JointState joint_angles(std::span<const double> absolute);

// Tip pose [x_n, y_n, theta_n + tip_offset].
TipPose forward_kinematics(const PRBModel& model, const JointState& state);

// Positions of joints 1..n followed by the tip; index 0 is the base.
std::vector<Eigen::Vector2d> joint_positions(const PRBModel& model, const JointState& state);

Jacobian jacobian(const PRBModel& model, const JointState& state);

Eigen::VectorXd joint_torques(const Jacobian& j, const TipWrench& w);

enum class SingularPolicy { Throw, MinimumNorm };

struct WrenchEstimate {
  TipWrench wrench;
  bool singular = false;
};

// Least-squares solution of J^T w = K (phi - phi_rest).
WrenchEstimate estimate_wrench(const PRBModel& model, const JointState& state,
                               SingularPolicy policy = SingularPolicy::Throw);

}  // namespace prb
