#pragma once

// Planar large-deflection beam: profiles, tip loads and the shooting solver
// that produces the deformed centerline of a clamped member.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace prb {

// Thrown for malformed profiles, beam specs or wrenches.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when the boundary-value problem cannot be solved.
class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Piecewise-linear table over strictly increasing abscissae.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(std::vector<double> s, std::vector<double> v);

  double value(double s) const;
  double slope(double s) const;

  const std::vector<double>& abscissae() const { return s_; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::size_t segment(double s) const;

  std::vector<double> s_;
  std::vector<double> v_;
};

// Flexural rigidity EI(s) in N*mm^2.
class StiffnessProfile {
 public:
  enum class Kind { Constant, Linear, Tabulated };

  static StiffnessProfile constant(double ei);
  // EI(s) = base + (tip - base) * s / length
  static StiffnessProfile linear(double base, double tip, double length);
  static StiffnessProfile tabulated(std::vector<double> s, std::vector<double> ei);

  double operator()(double s) const;
  double derivative(double s) const;

  Kind kind() const { return kind_; }
  // Parameters in declaration order: {ei}, {base, tip, length} or the table.
  const std::vector<double>& parameters() const { return params_; }
  const PiecewiseLinear& table() const { return table_; }

  // Throws InvalidInput unless EI > 0 at every breakpoint of [0, length]
  // and any table spans exactly [0, length].
  void validate(double length) const;

  // Same profile stretched proportionally onto a new length.
  StiffnessProfile rescaled(double old_length, double new_length) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::Constant;
  std::vector<double> params_;
  PiecewiseLinear table_;
};

// Initial curvature kappa(s) = 1/r(s) in 1/mm; zero is a straight member.
class CurvatureProfile {
 public:
  enum class Kind { Constant, Linear, LinearRadius, Tabulated };

  static CurvatureProfile straight() { return constant(0.0); }
  static CurvatureProfile constant(double kappa);
  // kappa(s) = base + (tip - base) * s / length
  static CurvatureProfile linear(double base, double tip, double length);
  // r(s) = r_base + (r_tip - r_base) * s / length, kappa = 1/r
  static CurvatureProfile linear_radius(double r_base, double r_tip, double length);
  static CurvatureProfile tabulated(std::vector<double> s, std::vector<double> kappa);

  double operator()(double s) const;
  double derivative(double s) const;
  // Closed-form integral of kappa over [0, s]: the unloaded tangent angle.
  double integral(double s) const;

  Kind kind() const { return kind_; }
  const std::vector<double>& parameters() const { return params_; }
  const PiecewiseLinear& table() const { return table_; }

  void validate(double length) const;
  CurvatureProfile rescaled(double old_length, double new_length) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Constant;
  std::vector<double> params_;
  PiecewiseLinear table_;
};

struct BeamSpec {
  double length = 0.0;  // mm
  StiffnessProfile stiffness;
  CurvatureProfile curvature;

  void validate() const;
  BeamSpec resized(double new_length) const;
  // Canonical text form; hashed into the digests that tie artifacts to a spec.
  std::string canonical() const;
};

// Planar tip wrench [fx, fy, mt] in N, N, N*mm.
struct TipWrench {
  double fx = 0.0;
  double fy = 0.0;
  double mt = 0.0;

  double magnitude() const;
  // Load direction from +x, counterclockwise.
  double angle() const;
  bool is_zero() const { return fx == 0.0 && fy == 0.0 && mt == 0.0; }
};

// Builds a wrench from magnitude f >= 0, direction psi (rad) and moment mt.
TipWrench make_wrench(double f, double psi, double mt);

struct TipPose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

struct CenterlinePoint {
  double x = 0.0;
  double y = 0.0;
  double s = 0.0;
};

struct CenterlineSolution {
  double length = 0.0;
  std::size_t grid_count = 0;  // number of intervals
  std::vector<double> theta;   // rad
  std::vector<double> moment;  // N*mm
  std::vector<double> x;       // mm
  std::vector<double> y;       // mm
  double shooting_residual = 0.0;
  int shooting_iterations = 0;

  double arc(std::size_t j) const { return length * static_cast<double>(j) / static_cast<double>(grid_count); }
  TipPose tip() const { return {x.back(), y.back(), theta.back()}; }
};

struct SolverOptions {
  double tolerance = 1e-10;  // on |m(S) - mt|, N*mm
  int max_iterations = 50;
};

// Integrates theta' = m/EI + kappa, m' = f sin(theta - psi), x' = cos theta,
// y' = sin theta from the clamped base with fixed-step RK4, shooting on the
// base moment until m(S) = mt.
CenterlineSolution solve_deflection(const BeamSpec& spec, const TipWrench& w, std::size_t grid_count,
                                    const SolverOptions& options = {});

// n+1 equidistant-arc-length points, read directly off the solver grid.
std::vector<CenterlinePoint> sample_centerline(const CenterlineSolution& sol, std::size_t n);

// Grid samples at arbitrary node indices, e.g. for unequal segment partitions.
std::vector<CenterlinePoint> sample_centerline_at(const CenterlineSolution& sol,
                                                  const std::vector<std::size_t>& nodes);

}  // namespace prb
