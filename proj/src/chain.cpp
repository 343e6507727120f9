#include "prb/chain.hpp"

#include <cmath>

#include <fmt/format.h>

namespace prb {

namespace {

void check_dims(const PRBModel& model, const JointState& state) {
  if (state.dof() != model.dof()) {
    throw DimensionMismatch(fmt::format("joint state has {} angles, model has {} joints", state.dof(), model.dof()));
  }
}

}  // namespace

void PRBModel::validate() const {
  const std::size_t n = lengths.size();
  if (n == 0) throw InvalidInput("model needs at least one segment");
  if (stiffness.size() != n || rest_angles.size() != n) {
    throw DimensionMismatch("model lengths, stiffness and rest angles must have the same size");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lengths[i] > 0.0)) throw InvalidInput(fmt::format("segment {} length must be positive", i + 1));
    if (!(stiffness[i] > 0.0)) throw InvalidInput(fmt::format("joint {} stiffness must be positive", i + 1));
  }
}

std::vector<double> JointState::absolute_angles() const {
  std::vector<double> theta(phi.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    acc += phi[i];
    theta[i] = acc;
  }
  return theta;
}

std::vector<double> segment_angles(std::span<const CenterlinePoint> points) {
  if (points.size() < 2) throw InvalidInput("need at least two points for a segment angle");
  std::vector<double> theta(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double dx = points[i].x - points[i - 1].x;
    const double dy = points[i].y - points[i - 1].y;
    if (dx == 0.0 && dy == 0.0) throw InvalidInput(fmt::format("points {} and {} coincide", i - 1, i));
    theta[i - 1] = std::atan2(dy, dx);
  }
  return theta;
}

JointState joint_angles(std::span<const double> absolute) {
  JointState st;
  st.phi.resize(absolute.size());
  for (std::size_t i = 0; i < absolute.size(); ++i) st.phi[i] = i == 0 ? absolute[0] : absolute[i] - absolute[i - 1];
  return st;
}

std::vector<Eigen::Vector2d> joint_positions(const PRBModel& model, const JointState& state) {
  check_dims(model, state);
  std::vector<Eigen::Vector2d> p(model.dof() + 1, Eigen::Vector2d::Zero());
  double theta = 0.0;
  for (std::size_t i = 0; i < model.dof(); ++i) {
    theta += state.phi[i];
    p[i + 1] = p[i] + model.lengths[i] * Eigen::Vector2d(std::cos(theta), std::sin(theta));
  }
  return p;
}

TipPose forward_kinematics(const PRBModel& model, const JointState& state) {
  const auto p = joint_positions(model, state);
  double theta = model.tip_offset;
  for (double phi : state.phi) theta += phi;
  return {p.back().x(), p.back().y(), theta};
}

Jacobian jacobian(const PRBModel& model, const JointState& state) {
  const auto p = joint_positions(model, state);
  const Eigen::Vector2d& tip = p.back();
  Jacobian j(3, static_cast<Eigen::Index>(model.dof()));
  for (std::size_t i = 0; i < model.dof(); ++i) {
    const Eigen::Vector2d arm = tip - p[i];
    j.col(static_cast<Eigen::Index>(i)) << -arm.y(), arm.x(), 1.0;
  }
  return j;
}

Eigen::VectorXd joint_torques(const Jacobian& j, const TipWrench& w) {
  return j.transpose() * Eigen::Vector3d(w.fx, w.fy, w.mt);
}

WrenchEstimate estimate_wrench(const PRBModel& model, const JointState& state, SingularPolicy policy) {
  check_dims(model, state);
  if (model.stiffness.size() != model.dof() || model.rest_angles.size() != model.dof()) {
    throw DimensionMismatch("model stiffness/rest angles do not match its segment count");
  }
  const Jacobian j = jacobian(model, state);
  const auto n = static_cast<Eigen::Index>(model.dof());
  Eigen::VectorXd tau(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    tau(i) = model.stiffness[k] * (state.phi[k] - model.rest_angles[k]);
  }

  const Eigen::MatrixXd jt = j.transpose();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jt);
  cod.setThreshold(1e-12);
  const bool singular = cod.rank() < 3;
  if (singular && policy == SingularPolicy::Throw) {
    throw SingularConfiguration(fmt::format("J^T has rank {} < 3 at this configuration", cod.rank()));
  }
  const Eigen::Vector3d w = cod.solve(tau);
  return {{w(0), w(1), w(2)}, singular};
}

}  // namespace prb
