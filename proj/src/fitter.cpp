#include "prb/fitter.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "prb/digest.hpp"
#include "prb/parallel.hpp"

namespace prb {

namespace {

constexpr double kMinDeflection = 1e-20;  // rad^2; below this a joint is treated as never deflecting

std::vector<double> unwrap(std::vector<double> theta) {
  for (std::size_t i = 1; i < theta.size(); ++i) {
    while (theta[i] - theta[i - 1] > std::numbers::pi) theta[i] -= 2.0 * std::numbers::pi;
    while (theta[i] - theta[i - 1] < -std::numbers::pi) theta[i] += 2.0 * std::numbers::pi;
  }
  return theta;
}

// Grid nodes at the segment boundaries; throws unless they land on nodes.
std::vector<std::size_t> boundary_nodes(const std::vector<double>& lengths, double total, std::size_t grid_count) {
  std::vector<std::size_t> nodes{0};
  double acc = 0.0;
  for (double l : lengths) {
    acc += l;
    const double pos = acc / total * static_cast<double>(grid_count);
    const double node = std::round(pos);
    if (std::abs(pos - node) > 1e-6) {
      throw InvalidInput(fmt::format("segment boundary s = {} does not fall on a solver grid node (grid_count {})", acc,
                                     grid_count));
    }
    nodes.push_back(static_cast<std::size_t>(node));
  }
  nodes.back() = grid_count;
  return nodes;
}

std::vector<double> chord_angles(const CenterlineSolution& sol, const std::vector<std::size_t>& nodes) {
  const auto pts = sample_centerline_at(sol, nodes);
  return unwrap(segment_angles(pts));
}

}  // namespace

// --- Load grid --------------------------------------------------------------

double AxisRange::at(std::size_t i) const {
  if (count == 1) return min;
  if (i + 1 == count) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

LoadGrid::LoadGrid(LoadGridSpec spec) : spec_(spec) {
  size_ = 1;
  for (std::size_t a = 0; a < 3; ++a) {
    const auto& ax = spec_.axes[a];
    if (ax.count == 0) throw InvalidInput(fmt::format("load grid axis {} is empty", a));
    if (!std::isfinite(ax.min) || !std::isfinite(ax.max) || ax.min > ax.max) {
      throw InvalidInput(fmt::format("load grid axis {} needs finite min <= max", a));
    }
    size_ *= ax.count;
  }
  if (spec_.kind == LoadGridSpec::Kind::Polar && spec_.axes[0].min < 0.0) {
    throw InvalidInput("polar load grid needs a non-negative force magnitude range");
  }
}

std::array<double, 3> LoadGrid::coordinates(std::size_t q) const {
  const std::size_t c1 = spec_.axes[1].count, c2 = spec_.axes[2].count;
  const std::size_t i2 = q % c2;
  const std::size_t i1 = (q / c2) % c1;
  const std::size_t i0 = q / (c1 * c2);
  return {spec_.axes[0].at(i0), spec_.axes[1].at(i1), spec_.axes[2].at(i2)};
}

TipWrench LoadGrid::wrench(std::size_t q) const {
  const auto c = coordinates(q);
  if (spec_.kind == LoadGridSpec::Kind::Box) return {c[0], c[1], c[2]};
  return make_wrench(c[0], c[1], c[2]);
}

std::vector<TipWrench> LoadGrid::wrenches() const {
  std::vector<TipWrench> out(size_);
  for (std::size_t q = 0; q < size_; ++q) out[q] = wrench(q);
  return out;
}

LoadGrid LoadGrid::scaled(double c) const {
  LoadGridSpec s = spec_;
  auto scale = [c](AxisRange& a) {
    a.min *= c;
    a.max *= c;
    if (a.min > a.max) std::swap(a.min, a.max);
  };
  // The polar angle axis is not a load magnitude.
  scale(s.axes[0]);
  if (s.kind == LoadGridSpec::Kind::Box) scale(s.axes[1]);
  scale(s.axes[2]);
  return LoadGrid(s);
}

std::string LoadGrid::canonical() const {
  std::string out = spec_.kind == LoadGridSpec::Kind::Box ? "box" : "polar";
  for (const auto& a : spec_.axes) out += fmt::format(";{}:{}:{}", a.min, a.max, a.count);
  return out;
}

LoadGrid build_load_grid(const LoadGridSpec& spec) { return LoadGrid(spec); }

// --- Fit --------------------------------------------------------------------

FitResult fit(const BeamSpec& spec, std::size_t n, const LoadGrid& grid, const FitOptions& options,
              std::optional<std::vector<double>> segment_lengths) {
  spec.validate();
  if (n == 0) throw InvalidInput("degrees of freedom must be at least 1");
  if (grid.size() == 0) throw EmptyGrid("load grid is empty");

  std::vector<double> lengths;
  if (segment_lengths) {
    lengths = *segment_lengths;
    if (lengths.size() != n) throw DimensionMismatch(fmt::format("{} segment lengths given for {} joints", lengths.size(), n));
    double sum = 0.0;
    for (double l : lengths) {
      if (!(l > 0.0)) throw InvalidInput("segment lengths must be positive");
      sum += l;
    }
    if (std::abs(sum - spec.length) > 1e-9 * spec.length) {
      throw InvalidInput(fmt::format("segment lengths sum to {}, member length is {}", sum, spec.length));
    }
  } else {
    lengths.assign(n, spec.length / static_cast<double>(n));
  }

  const std::size_t grid_count = options.grid_count != 0 ? options.grid_count : options.grid_multiplier * n;
  const auto nodes = boundary_nodes(lengths, spec.length, grid_count);

  FitResult out;
  out.grid_count = grid_count;
  PRBModel& model = out.model;
  model.lengths = lengths;
  model.source_digest = short_digest(spec.canonical());

  const CenterlineSolution rest = solve_deflection(spec, TipWrench{}, grid_count, options.solver);
  const auto rest_chords = chord_angles(rest, nodes);
  model.rest_angles = joint_angles(rest_chords).phi;
  model.tip_offset = rest.tip().theta - rest_chords.back();
  model.stiffness.assign(n, 1.0);
  out.rest_tip_angle = rest.tip().theta;

  out.cases.resize(grid.size());
  parallel_for(grid.size(), options.threads, [&](std::size_t q) {
    FitCase& c = out.cases[q];
    c.wrench = grid.wrench(q);
    CenterlineSolution sol;
    try {
      sol = solve_deflection(spec, c.wrench, grid_count, options.solver);
    } catch (const SolveError& e) {
      throw FitError(fmt::format("load case {} [{}, {}, {}]: {}", q, c.wrench.fx, c.wrench.fy, c.wrench.mt, e.what()));
    }
    c.state = joint_angles(chord_angles(sol, nodes));
    c.delta_phi.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.delta_phi[i] = c.state.phi[i] - model.rest_angles[i];
    c.jacobian = jacobian(model, c.state);
    c.torque = joint_torques(c.jacobian, c.wrench);
    c.continuum_tip = sol.tip();
    c.prb_tip = forward_kinematics(model, c.state);
  });

  for (std::size_t i = 0; i < n; ++i) {
    const double k = optimal_stiffness(out.cases, i);
    if (!(k > 0.0)) {
      throw FitError(fmt::format("joint {} fitted to non-positive stiffness {}", i + 1, k), i + 1);
    }
    model.stiffness[i] = k;
  }

  for (auto& c : out.cases) c.estimate = estimate_wrench(model, c.state, SingularPolicy::MinimumNorm);
  return out;
}

double optimal_stiffness(std::span<const FitCase> cases, std::size_t joint) {
  double num = 0.0, den = 0.0;
  for (const auto& c : cases) {
    if (joint >= c.delta_phi.size()) throw DimensionMismatch(fmt::format("joint {} out of range", joint + 1));
    const double d = c.delta_phi[joint];
    num += c.torque(static_cast<Eigen::Index>(joint)) * d;
    den += d * d;
  }
  if (den < kMinDeflection) {
    throw FitError(fmt::format("joint {} never deflects over the load grid (sum dphi^2 = {})", joint + 1, den),
                   joint + 1);
  }
  return num / den;
}

ForceCost force_cost(std::span<const FitCase> cases, std::span<const double> stiffness) {
  ForceCost out;
  out.per_joint.assign(stiffness.size(), 0.0);
  if (cases.empty()) return out;
  for (const auto& c : cases) {
    if (c.delta_phi.size() != stiffness.size()) throw DimensionMismatch("stiffness size does not match load cases");
    for (std::size_t i = 0; i < stiffness.size(); ++i) {
      const double r = stiffness[i] * c.delta_phi[i] - c.torque(static_cast<Eigen::Index>(i));
      out.per_joint[i] += r * r;
    }
  }
  const auto n = static_cast<double>(cases.size());
  for (double& e : out.per_joint) {
    e /= n;
    out.total += e;
  }
  return out;
}

PositionCost position_cost(std::span<const FitCase> cases) {
  PositionCost out;
  if (cases.empty()) return out;
  for (const auto& c : cases) {
    const double dx = c.continuum_tip.x - c.prb_tip.x;
    const double dy = c.continuum_tip.y - c.prb_tip.y;
    const double dt = c.continuum_tip.theta - c.prb_tip.theta;
    out.combined += dx * dx + dy * dy + dt * dt;
    out.position += std::hypot(dx, dy);
    out.angle += std::abs(dt);
  }
  const auto n = static_cast<double>(cases.size());
  out.combined /= n;
  out.position /= n;
  out.angle /= n;
  return out;
}

FitReport make_report(FitResult result, double length) {
  FitReport r;
  r.force = force_cost(result.cases, result.model.stiffness);
  r.position = position_cost(result.cases);
  r.errors = error_report(result.cases, length, result.rest_tip_angle);
  r.fit = std::move(result);
  return r;
}

// --- Sweeps -----------------------------------------------------------------

std::size_t sweep_grid_count(std::size_t resolution, std::size_t n, std::size_t grid_multiplier) {
  const std::size_t target = grid_multiplier * n;
  return ((target + resolution - 1) / resolution) * resolution;
}

std::vector<SegmentSweepRow> sweep_segment_combinations(const BeamSpec& spec, const LoadGrid& grid,
                                                        std::size_t resolution, const FitOptions& options) {
  if (resolution < 3) throw InvalidInput("segment sweep resolution must be at least 3");
  FitOptions opts = options;
  if (opts.grid_count == 0) opts.grid_count = sweep_grid_count(resolution, 3, options.grid_multiplier);
  if (opts.grid_count % resolution != 0) {
    throw InvalidInput(fmt::format("grid_count {} is not a multiple of resolution {}", opts.grid_count, resolution));
  }

  const double step = spec.length / static_cast<double>(resolution);
  std::vector<SegmentSweepRow> rows;
  for (std::size_t i = 1; i + 2 <= resolution; ++i) {
    for (std::size_t j = 1; i + j + 1 <= resolution; ++j) {
      const std::size_t k = resolution - i - j;
      SegmentSweepRow row;
      row.lengths = {static_cast<double>(i) * step, static_cast<double>(j) * step, static_cast<double>(k) * step};
      // Fractions of S in exact integer steps; the last length absorbs rounding.
      row.lengths[2] = spec.length - row.lengths[0] - row.lengths[1];
      FitResult fr = fit(spec, 3, grid, opts, std::vector<double>(row.lengths.begin(), row.lengths.end()));
      for (std::size_t a = 0; a < 3; ++a) row.stiffness[a] = fr.model.stiffness[a];
      row.errors = error_report(fr.cases, spec.length, fr.rest_tip_angle);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<LengthSweepPoint> sweep_lengths(const BeamSpec& spec, std::size_t n, std::span<const double> lengths,
                                            const LoadGrid& grid, const FitOptions& options) {
  std::vector<LengthSweepPoint> out;
  out.reserve(lengths.size());
  for (double s : lengths) {
    if (!(s > 0.0)) throw InvalidInput(fmt::format("sweep length must be positive, got {}", s));
    const FitResult fr = fit(spec.resized(s), n, grid, options);
    out.push_back({s, fr.model.stiffness});
  }
  return out;
}

PowerLawFit power_law_fit(std::span<const double> length, std::span<const double> stiffness) {
  if (length.size() != stiffness.size()) throw DimensionMismatch("power law fit needs paired samples");
  PowerLawFit out;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < length.size(); ++i) {
    if (!(stiffness[i] > 0.0) || !(length[i] > 0.0)) {
      ++out.rejected;
      continue;
    }
    lx.push_back(std::log(length[i]));
    ly.push_back(std::log(stiffness[i]));
  }
  out.used = lx.size();
  if (out.used < 3) {
    throw InvalidInput(fmt::format("power law fit needs at least 3 positive points, have {}", out.used));
  }

  const auto m = static_cast<double>(out.used);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidInput("power law fit needs at least two distinct lengths");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  out.sigma = -slope;
  out.kappa = std::exp(intercept);

  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ss += r * r;
  }
  out.rms = std::sqrt(ss / m);
  return out;
}

}  // namespace prb
