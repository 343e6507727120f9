#include "prb/beam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "prb/rk4.hpp"

namespace prb {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

bool same_length(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

void check_table_span(const PiecewiseLinear& t, double length, const char* what) {
  const auto& s = t.abscissae();
  if (s.front() != 0.0 || !same_length(s.back(), length)) {
    throw InvalidInput(fmt::format("{} table must span [0, {}], got [{}, {}]", what, length, s.front(), s.back()));
  }
}

std::string join(const std::vector<double>& v) {
  return fmt::format("{}", fmt::join(v, ","));
}

std::string table_text(const PiecewiseLinear& t) {
  return fmt::format("tabulated(s={};v={})", join(t.abscissae()), join(t.values()));
}

}  // namespace

// --- PiecewiseLinear --------------------------------------------------------

PiecewiseLinear::PiecewiseLinear(std::vector<double> s, std::vector<double> v) : s_(std::move(s)), v_(std::move(v)) {
  if (s_.size() < 2 || s_.size() != v_.size()) {
    throw InvalidInput("tabulated profile needs at least two (s, value) pairs of equal count");
  }
  if (!all_finite(s_) || !all_finite(v_)) throw InvalidInput("tabulated profile has non-finite entries");
  for (std::size_t i = 1; i < s_.size(); ++i) {
    if (!(s_[i] > s_[i - 1])) throw InvalidInput("tabulated abscissae must be strictly increasing");
  }
}

std::size_t PiecewiseLinear::segment(double s) const {
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const auto idx = static_cast<std::size_t>(std::distance(s_.begin(), it));
  return std::clamp<std::size_t>(idx, 1, s_.size() - 1) - 1;
}

double PiecewiseLinear::value(double s) const {
  if (s <= s_.front()) return v_.front();
  if (s >= s_.back()) return v_.back();
  const std::size_t i = segment(s);
  const double t = (s - s_[i]) / (s_[i + 1] - s_[i]);
  return v_[i] + t * (v_[i + 1] - v_[i]);
}

double PiecewiseLinear::slope(double s) const {
  const std::size_t i = segment(s);
  return (v_[i + 1] - v_[i]) / (s_[i + 1] - s_[i]);
}

// --- StiffnessProfile -------------------------------------------------------

StiffnessProfile StiffnessProfile::constant(double ei) {
  StiffnessProfile p;
  p.kind_ = Kind::Constant;
  p.params_ = {ei};
  return p;
}

StiffnessProfile StiffnessProfile::linear(double base, double tip, double length) {
  if (!(length > 0.0)) throw InvalidInput("linear stiffness profile needs a positive length");
  StiffnessProfile p;
  p.kind_ = Kind::Linear;
  p.params_ = {base, tip, length};
  return p;
}

StiffnessProfile StiffnessProfile::tabulated(std::vector<double> s, std::vector<double> ei) {
  StiffnessProfile p;
  p.kind_ = Kind::Tabulated;
  p.table_ = PiecewiseLinear(std::move(s), std::move(ei));
  return p;
}

double StiffnessProfile::operator()(double s) const {
  switch (kind_) {
    case Kind::Constant:
      return params_[0];
    case Kind::Linear:
      return params_[0] + (params_[1] - params_[0]) * s / params_[2];
    case Kind::Tabulated:
      return table_.value(s);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double StiffnessProfile::derivative(double s) const {
  switch (kind_) {
    case Kind::Constant:
      return 0.0;
    case Kind::Linear:
      return (params_[1] - params_[0]) / params_[2];
    case Kind::Tabulated:
      return table_.slope(s);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void StiffnessProfile::validate(double length) const {
  if (!all_finite(params_)) throw InvalidInput("stiffness profile has non-finite parameters");
  std::vector<double> breakpoints;
  switch (kind_) {
    case Kind::Constant:
      breakpoints = {0.0};
      break;
    case Kind::Linear:
      if (!same_length(params_[2], length)) {
        throw InvalidInput(fmt::format("linear stiffness profile defined on [0, {}], beam length is {}", params_[2], length));
      }
      breakpoints = {0.0, length};
      break;
    case Kind::Tabulated:
      check_table_span(table_, length, "stiffness");
      breakpoints = table_.abscissae();
      break;
  }
  for (double s : breakpoints) {
    const double ei = (*this)(s);
    if (!(ei > 0.0)) throw InvalidInput(fmt::format("flexural rigidity must be positive, EI({}) = {}", s, ei));
  }
}

StiffnessProfile StiffnessProfile::rescaled(double old_length, double new_length) const {
  switch (kind_) {
    case Kind::Constant:
      return *this;
    case Kind::Linear:
      return linear(params_[0], params_[1], new_length);
    case Kind::Tabulated: {
      std::vector<double> s = table_.abscissae();
      for (double& v : s) v *= new_length / old_length;
      s.back() = new_length;
      return tabulated(std::move(s), table_.values());
    }
  }
  return *this;
}

std::string StiffnessProfile::describe() const {
  switch (kind_) {
    case Kind::Constant:
      return fmt::format("constant({})", params_[0]);
    case Kind::Linear:
      return fmt::format("linear({})", join(params_));
    case Kind::Tabulated:
      return table_text(table_);
  }
  return {};
}

// --- CurvatureProfile -------------------------------------------------------

CurvatureProfile CurvatureProfile::constant(double kappa) {
  CurvatureProfile p;
  p.kind_ = Kind::Constant;
  p.params_ = {kappa};
  return p;
}

CurvatureProfile CurvatureProfile::linear(double base, double tip, double length) {
  if (!(length > 0.0)) throw InvalidInput("linear curvature profile needs a positive length");
  CurvatureProfile p;
  p.kind_ = Kind::Linear;
  p.params_ = {base, tip, length};
  return p;
}

CurvatureProfile CurvatureProfile::linear_radius(double r_base, double r_tip, double length) {
  if (!(length > 0.0)) throw InvalidInput("linear radius profile needs a positive length");
  if (!(r_base * r_tip > 0.0)) {
    throw InvalidInput("linear radius profile must not pass through zero radius");
  }
  CurvatureProfile p;
  p.kind_ = Kind::LinearRadius;
  p.params_ = {r_base, r_tip, length};
  return p;
}

CurvatureProfile CurvatureProfile::tabulated(std::vector<double> s, std::vector<double> kappa) {
  CurvatureProfile p;
  p.kind_ = Kind::Tabulated;
  p.table_ = PiecewiseLinear(std::move(s), std::move(kappa));
  return p;
}

double CurvatureProfile::operator()(double s) const {
  switch (kind_) {
    case Kind::Constant:
      return params_[0];
    case Kind::Linear:
      return params_[0] + (params_[1] - params_[0]) * s / params_[2];
    case Kind::LinearRadius:
      return 1.0 / (params_[0] + (params_[1] - params_[0]) * s / params_[2]);
    case Kind::Tabulated:
      return table_.value(s);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double CurvatureProfile::derivative(double s) const {
  switch (kind_) {
    case Kind::Constant:
      return 0.0;
    case Kind::Linear:
      return (params_[1] - params_[0]) / params_[2];
    case Kind::LinearRadius: {
      const double a = (params_[1] - params_[0]) / params_[2];
      const double r = params_[0] + a * s;
      return -a / (r * r);
    }
    case Kind::Tabulated:
      return table_.slope(s);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double CurvatureProfile::integral(double s) const {
  switch (kind_) {
    case Kind::Constant:
      return params_[0] * s;
    case Kind::Linear:
      return params_[0] * s + 0.5 * (params_[1] - params_[0]) * s * s / params_[2];
    case Kind::LinearRadius: {
      const double a = (params_[1] - params_[0]) / params_[2];
      if (a == 0.0) return s / params_[0];
      return std::log((params_[0] + a * s) / params_[0]) / a;
    }
    case Kind::Tabulated: {
      const auto& xs = table_.abscissae();
      double acc = 0.0;
      for (std::size_t i = 1; i < xs.size() && xs[i - 1] < s; ++i) {
        const double hi = std::min(xs[i], s);
        acc += 0.5 * (table_.value(xs[i - 1]) + table_.value(hi)) * (hi - xs[i - 1]);
      }
      return acc;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void CurvatureProfile::validate(double length) const {
  if (!all_finite(params_)) throw InvalidInput("curvature profile has non-finite parameters");
  switch (kind_) {
    case Kind::Constant:
      break;
    case Kind::Linear:
    case Kind::LinearRadius:
      if (!same_length(params_[2], length)) {
        throw InvalidInput(fmt::format("curvature profile defined on [0, {}], beam length is {}", params_[2], length));
      }
      break;
    case Kind::Tabulated:
      check_table_span(table_, length, "curvature");
      break;
  }
}

CurvatureProfile CurvatureProfile::rescaled(double old_length, double new_length) const {
  switch (kind_) {
    case Kind::Constant:
      return *this;
    case Kind::Linear:
      return linear(params_[0], params_[1], new_length);
    case Kind::LinearRadius:
      return linear_radius(params_[0], params_[1], new_length);
    case Kind::Tabulated: {
      std::vector<double> s = table_.abscissae();
      for (double& v : s) v *= new_length / old_length;
      s.back() = new_length;
      return tabulated(std::move(s), table_.values());
    }
  }
  return *this;
}

std::string CurvatureProfile::describe() const {
  switch (kind_) {
    case Kind::Constant:
      return fmt::format("constant({})", params_[0]);
    case Kind::Linear:
      return fmt::format("linear({})", join(params_));
    case Kind::LinearRadius:
      return fmt::format("linear_radius({})", join(params_));
    case Kind::Tabulated:
      return table_text(table_);
  }
  return {};
}

// --- BeamSpec / TipWrench ---------------------------------------------------

void BeamSpec::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidInput(fmt::format("beam length must be positive, got {}", length));
  stiffness.validate(length);
  curvature.validate(length);
}

BeamSpec BeamSpec::resized(double new_length) const {
  if (!(new_length > 0.0)) throw InvalidInput("resized beam length must be positive");
  return {new_length, stiffness.rescaled(length, new_length), curvature.rescaled(length, new_length)};
}

std::string BeamSpec::canonical() const {
  return fmt::format("length={};stiffness={};curvature={}", length, stiffness.describe(), curvature.describe());
}

double TipWrench::magnitude() const { return std::hypot(fx, fy); }

double TipWrench::angle() const { return std::atan2(fy, fx); }

TipWrench make_wrench(double f, double psi, double mt) {
  if (!std::isfinite(f) || !std::isfinite(psi) || !std::isfinite(mt)) {
    throw InvalidInput("wrench components must be finite");
  }
  if (f < 0.0) throw InvalidInput(fmt::format("force magnitude must be non-negative, got {}", f));
  return {f * std::cos(psi), f * std::sin(psi), mt};
}

// --- Solver -----------------------------------------------------------------

namespace {

// State [theta, m, x, y].
using BeamState = OdeState<4>;

struct BeamRhs {
  const BeamSpec& spec;
  double fx;
  double fy;

  BeamState operator()(double s, const BeamState& u) const {
    const double c = std::cos(u[0]);
    const double sn = std::sin(u[0]);
    // f sin(theta - psi) expanded in components
    return {u[1] / spec.stiffness(s) + spec.curvature(s), fx * sn - fy * c, c, sn};
  }
};

class Shooter {
 public:
  Shooter(const BeamSpec& spec, const TipWrench& w, std::size_t grid_count)
      : rhs_{spec, w.fx, w.fy}, h_(spec.length / static_cast<double>(grid_count)), steps_(grid_count), mt_(w.mt) {}

  // m(S) - mt for a trial base moment.
  double residual(double m0) {
    ++evaluations_;
    const BeamState end = rk4_integrate<4>(rhs_, BeamState{0.0, m0, 0.0, 0.0}, 0.0, h_, steps_,
                                           [](std::size_t, const BeamState&) {});
    return end[1] - mt_;
  }

  void record(double m0, CenterlineSolution& out) const {
    const std::size_t n = steps_ + 1;
    out.theta.resize(n);
    out.moment.resize(n);
    out.x.resize(n);
    out.y.resize(n);
    rk4_integrate<4>(rhs_, BeamState{0.0, m0, 0.0, 0.0}, 0.0, h_, steps_, [&](std::size_t j, const BeamState& u) {
      out.theta[j] = u[0];
      out.moment[j] = u[1];
      out.x[j] = u[2];
      out.y[j] = u[3];
    });
  }

  int evaluations() const { return evaluations_; }

 private:
  BeamRhs rhs_;
  double h_;
  std::size_t steps_;
  double mt_;
  int evaluations_ = 0;
};

std::string wrench_text(const TipWrench& w) { return fmt::format("[{}, {}, {}]", w.fx, w.fy, w.mt); }

}  // namespace

CenterlineSolution solve_deflection(const BeamSpec& spec, const TipWrench& w, std::size_t grid_count,
                                    const SolverOptions& options) {
  spec.validate();
  if (grid_count < 2) throw InvalidInput("grid_count must be at least 2");
  if (!std::isfinite(w.fx) || !std::isfinite(w.fy) || !std::isfinite(w.mt)) {
    throw InvalidInput("wrench components must be finite");
  }

  Shooter shooter(spec, w, grid_count);
  const double tol = options.tolerance;
  double m0 = w.mt;
  double r = 0.0;
  bool converged = false;

  if (w.fx == 0.0 && w.fy == 0.0) {
    // m' = 0 along the member, so the base moment equals the tip moment.
    r = shooter.residual(m0);
    converged = std::abs(r) <= tol;
  } else {
    const double lever = w.magnitude() * spec.length;
    double a = w.mt + lever;
    double ra = shooter.residual(a);
    if (std::isfinite(ra) && std::abs(ra) <= tol) {
      m0 = a;
      r = ra;
      converged = true;
    } else if (std::isfinite(ra)) {
      // dm(S)/dm(0) is close to one for moderate loads; use it for the first step.
      double b = a - ra;
      for (int it = 1; it < options.max_iterations; ++it) {
        const double rb = shooter.residual(b);
        if (!std::isfinite(rb)) break;
        if (std::abs(rb) <= tol) {
          m0 = b;
          r = rb;
          converged = true;
          break;
        }
        if (rb == ra) break;
        const double next = b - rb * (b - a) / (rb - ra);
        a = b;
        ra = rb;
        b = next;
        if (!std::isfinite(b)) break;
      }
    }

    if (!converged) {
      double lo = w.mt - 4.0 * lever;
      double hi = w.mt + 4.0 * lever;
      double rlo = shooter.residual(lo);
      const double rhi = shooter.residual(hi);
      if (!std::isfinite(rlo) || !std::isfinite(rhi) || (rlo > 0.0) == (rhi > 0.0)) {
        throw SolveError(fmt::format("shooting did not converge for wrench {} (no bracket in m0 = mt +/- 4 f S)",
                                     wrench_text(w)));
      }
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double rm = shooter.residual(mid);
        if (std::abs(rm) <= tol) {
          m0 = mid;
          r = rm;
          converged = true;
          break;
        }
        if (mid == lo || mid == hi) break;
        if ((rm > 0.0) == (rlo > 0.0)) {
          lo = mid;
          rlo = rm;
        } else {
          hi = mid;
        }
      }
    }
  }

  if (!converged) {
    throw SolveError(fmt::format("shooting did not reach |m(S) - mt| <= {} for wrench {}", tol, wrench_text(w)));
  }

  CenterlineSolution sol;
  sol.length = spec.length;
  sol.grid_count = grid_count;
  shooter.record(m0, sol);
  sol.shooting_residual = std::abs(r);
  sol.shooting_iterations = shooter.evaluations();
  return sol;
}

std::vector<CenterlinePoint> sample_centerline_at(const CenterlineSolution& sol, const std::vector<std::size_t>& nodes) {
  std::vector<CenterlinePoint> pts;
  pts.reserve(nodes.size());
  for (std::size_t j : nodes) {
    if (j > sol.grid_count) throw InvalidInput(fmt::format("grid node {} outside [0, {}]", j, sol.grid_count));
    pts.push_back({sol.x[j], sol.y[j], sol.arc(j)});
  }
  return pts;
}

std::vector<CenterlinePoint> sample_centerline(const CenterlineSolution& sol, std::size_t n) {
  if (n == 0 || sol.grid_count % n != 0) {
    throw InvalidInput(fmt::format("sample count {} does not divide grid_count {}", n, sol.grid_count));
  }
  const std::size_t step = sol.grid_count / n;
  std::vector<std::size_t> nodes(n + 1);
  for (std::size_t i = 0; i <= n; ++i) nodes[i] = i * step;
  return sample_centerline_at(sol, nodes);
}

}  // namespace prb
