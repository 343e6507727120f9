#pragma once

// Chain-model synthesis from continuum solutions: load grids, the
// closed-form per-joint stiffness, residual costs and parameter sweeps.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "prb/beam.hpp"
#include "prb/chain.hpp"
#include "prb/fit_case.hpp"
#include "prb/metrics.hpp"

namespace prb {

class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& what, std::optional<std::size_t> joint = std::nullopt)
      : std::runtime_error(what), joint_(joint) {}
  // 1-based index of the offending joint, when the failure is joint-specific.
  std::optional<std::size_t> joint() const { return joint_; }

 private:
  std::optional<std::size_t> joint_;
};

// Uniformly spaced axis including both endpoints.
struct AxisRange {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  double at(std::size_t i) const;
};

struct LoadGridSpec {
  enum class Kind { Box, Polar };
  // Box: (fx, fy, mt). Polar: (f, psi, mt).
  Kind kind = Kind::Box;
  std::array<AxisRange, 3> axes;
};

class LoadGrid {
 public:
  explicit LoadGrid(LoadGridSpec spec);

  std::size_t size() const { return size_; }
  // Lexicographic over axis indices, last axis fastest.
  std::array<double, 3> coordinates(std::size_t q) const;
  TipWrench wrench(std::size_t q) const;
  std::vector<TipWrench> wrenches() const;

  const LoadGridSpec& spec() const { return spec_; }
  // Same grid with every force and moment bound multiplied by c.
  LoadGrid scaled(double c) const;
  std::string canonical() const;

 private:
  LoadGridSpec spec_;
  std::size_t size_ = 0;
};

LoadGrid build_load_grid(const LoadGridSpec& spec);

struct FitOptions {
  std::size_t grid_multiplier = 120;  // solver intervals per chain segment
  std::size_t grid_count = 0;         // overrides grid_multiplier * n when non-zero
  SolverOptions solver;
  unsigned threads = 1;               // 0 = all hardware threads
};

struct FitResult {
  PRBModel model;
  std::vector<FitCase> cases;
  double rest_tip_angle = 0.0;  // continuum tip angle at no load
  std::size_t grid_count = 0;
};

// Builds an n-segment chain for `spec`: unloaded solve for rest chord angles
// and tip offset, one solve per load for joint deflections and Jacobians,
// then per-joint optimal stiffness. Equal lengths S/n unless given.
FitResult fit(const BeamSpec& spec, std::size_t n, const LoadGrid& grid, const FitOptions& options = {},
              std::optional<std::vector<double>> segment_lengths = std::nullopt);

// sum_q tau_i dphi_i / sum_q dphi_i^2 for 0-based joint index i.
double optimal_stiffness(std::span<const FitCase> cases, std::size_t joint);

struct ForceCost {
  double total = 0.0;              // (1/N) sum_q ||K dphi - J^T w||^2
  std::vector<double> per_joint;   // sums to total
};

ForceCost force_cost(std::span<const FitCase> cases, std::span<const double> stiffness);

struct PositionCost {
  double combined = 0.0;  // (1/N) sum_q ||p - p_hat||^2 over [x, y, theta]
  double position = 0.0;  // mean planar tip distance, mm
  double angle = 0.0;     // mean |theta_t - theta_hat|, rad
};

PositionCost position_cost(std::span<const FitCase> cases);

struct FitReport {
  FitResult fit;
  ForceCost force;
  PositionCost position;
  ErrorReport errors;
};

FitReport make_report(FitResult result, double length);

struct SegmentSweepRow {
  std::array<double, 3> lengths{};
  std::array<double, 3> stiffness{};
  ErrorReport errors;
};

// All 3-part compositions of S in steps of S/resolution, ordered by (l1, l2).
std::vector<SegmentSweepRow> sweep_segment_combinations(const BeamSpec& spec, const LoadGrid& grid,
                                                        std::size_t resolution, const FitOptions& options = {});

// Smallest multiple of `resolution` not below grid_multiplier * n.
std::size_t sweep_grid_count(std::size_t resolution, std::size_t n, std::size_t grid_multiplier);

struct LengthSweepPoint {
  double length = 0.0;
  std::vector<double> stiffness;
};

std::vector<LengthSweepPoint> sweep_lengths(const BeamSpec& spec, std::size_t n, std::span<const double> lengths,
                                            const LoadGrid& grid, const FitOptions& options = {});

struct PowerLawFit {
  double kappa = 0.0;
  double sigma = 0.0;
  double rms = 0.0;  // in log space
  std::size_t used = 0;
  std::size_t rejected = 0;  // non-positive stiffness points
};

// Least squares on log k = log kappa - sigma log s.
PowerLawFit power_law_fit(std::span<const double> length, std::span<const double> stiffness);

}  // namespace prb
