#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "prb/beam.hpp"
#include "prb/chain.hpp"
#include "prb/fit_case.hpp"
#include "prb/presets.hpp"

namespace prb::test {

// Fixed-seed generator so property tests are reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_); }

 private:
  std::mt19937_64 gen_;
};

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

inline BeamSpec straight_beam(double length, double ei) {
  return {length, StiffnessProfile::constant(ei), CurvatureProfile::straight()};
}

inline BeamSpec arc_beam(double radius, double length, double ei) {
  return {length, StiffnessProfile::constant(ei), CurvatureProfile::constant(1.0 / radius)};
}

inline PRBModel random_model(Rng& rng, std::size_t n) {
  PRBModel m;
  for (std::size_t i = 0; i < n; ++i) {
    m.lengths.push_back(rng.uniform(0.5, 5.0));
    m.stiffness.push_back(rng.uniform(0.5, 20.0));
    m.rest_angles.push_back(rng.uniform(-0.3, 0.3));
  }
  m.tip_offset = rng.uniform(-0.1, 0.1);
  return m;
}

inline JointState random_state(Rng& rng, std::size_t n, double spread = 0.8) {
  JointState s;
  for (std::size_t i = 0; i < n; ++i) s.phi.push_back(rng.uniform(-spread, spread));
  return s;
}

// Synthetic load case with given per-joint deflections and torques; enough for
// the stiffness and cost routines, which only read delta_phi and torque.
inline FitCase synthetic_case(const std::vector<double>& dphi, const std::vector<double>& tau) {
  FitCase c;
  c.delta_phi = dphi;
  c.torque = Eigen::Map<const Eigen::VectorXd>(tau.data(), static_cast<Eigen::Index>(tau.size()));
  return c;
}

}  // namespace prb::test
