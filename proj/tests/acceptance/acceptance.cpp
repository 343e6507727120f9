// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed
// here; a failing criterion is reported, never relaxed.
//
// Usage: acceptance [--cli PATH] [--work DIR] [--only N[,N...]]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "prb/beam.hpp"
#include "prb/chain.hpp"
#include "prb/config.hpp"
#include "prb/fitter.hpp"
#include "prb/presets.hpp"

namespace fs = std::filesystem;
using namespace prb;

namespace {

// ---- pinned tolerances -----------------------------------------------------

constexpr double kMomentArcTol = 1e-6;       // relative, pure-moment tip
constexpr double kRestArcTol = 1e-10;        // relative, unloaded arc tip
constexpr std::size_t kOracleGrid = 1200;
constexpr double kStiffnessTol = 0.05;          // k2..kn vs EI n / S and k1 vs reference
constexpr double kCatheterTol = 0.15;
constexpr double kTwoValueTol = 1e-3;        // spread of k2..kn over k2
constexpr double kAnomalyGap = 0.10;         // |k3 - k2| / k2 at n = 3
constexpr double kReferenceFactor = 2.0;         // absolute error values vs reference
constexpr int kOptimalityInstances = 100;
constexpr std::size_t kScanSamples = 100000;
constexpr double kGradientTol = 1e-9;
constexpr int kJacobianPairs = 1000;
constexpr double kJacobianStep = 1e-6;
constexpr double kJacobianTol = 1e-6;
constexpr double kPowerLawExactTol = 1e-10;
constexpr double kSigmaLo = 0.95, kSigmaHi = 1.05;
constexpr double kSpearmanMin = 0.5;
constexpr double kGapSlope = 2.0, kGapSlopeTol = 0.2;
constexpr double kGapAt30 = 1e-3;            // mm

const std::vector<std::size_t> kDofs{3, 4, 10, 15, 20};

// ---- published reference values (N*m/rad and percent) ---------------------------

const std::vector<double> kReferenceK1{0.0205, 0.0271, 0.0666, 0.0995, 0.1323};

struct ReferenceErrors {
  std::array<std::array<double, 5>, 6> rows;  // e_x, e_y, e_theta, e_fx, e_fy, e_m by DoF
};

const std::map<std::string, ReferenceErrors> kReferenceErrors{
    {"catheter",
     {{{{0.2081, 0.1242, 0.0189, 0.0079, 0.0041},
        {0.2956, 0.1834, 0.0266, 0.0112, 0.0058},
        {6.9509, 5.3135, 1.8691, 1.08647, 0.6990},
        {0.2683, 0.2006, 0.0772, 0.0512, 0.0382},
        {0.0168, 0.0129, 0.0018, 0.0008, 0.0005},
        {0.3738, 0.2515, 0.0410, 0.0188, 0.0106}}}}},
    {"ctr_inner",
     {{{{0.3897, 0.2183, 0.0337, 0.0142, 0.0074},
        {0.2137, 0.1197, 0.0185, 0.0078, 0.0040},
        {0.5353, 0.3919, 0.1357, 0.0791, 0.0508},
        {0.1373, 0.1019, 0.0400, 0.0265, 0.0199},
        {0.0168, 0.0096, 0.0016, 0.0007, 0.0004},
        {0.5948, 0.3428, 0.0569, 0.0255, 0.0144}}}}},
    {"ctr_variable_curvature",
     {{{{5.9569, 0.3590, 0.0584, 0.0247, 0.0129},
        {0.9082, 1.1030, 0.1697, 0.0714, 0.0371},
        {0.8184, 0.3919, 0.1357, 0.0791, 0.0508},
        {0.1868, 0.1001, 0.0403, 0.0269, 0.0202},
        {0.0420, 0.0199, 0.0030, 0.0013, 0.0007},
        {2.0934, 0.7897, 0.1158, 0.0505, 0.0281}}}}},
    {"catheter_nonuniform_ei",
     {{{{0.0051, 0.0028, 0.0004, 0.0002, 0.0001},
        {0.1112, 0.0633, 0.0099, 0.0042, 0.0022},
        {3.1931, 2.4242, 0.8994, 0.5328, 0.3452},
        {0.0827, 0.0635, 0.0317, 0.0261, 0.0238},
        {0.0144, 0.0139, 0.0169, 0.0178, 0.0183},
        {0.3195, 0.2203, 0.3410, 0.3847, 0.4071}}}}},
};

const char* const kMetricNames[6] = {"e_x", "e_y", "e_theta", "e_fx", "e_fy", "e_m"};

// ---- helpers -----------------------------------------------------------------

struct Outcome {
  bool pass = false;
  std::vector<std::string> details;
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::optional<double> metric(const ErrorReport& e, int m) {
  switch (m) {
    case 0: return e.position.e_x;
    case 1: return e.position.e_y;
    case 2: return e.position.e_theta;
    case 3: return e.force.e_fx;
    case 4: return e.force.e_fy;
    default: return e.force.e_m;
  }
}

double spread_over_k2(const std::vector<double>& k) {
  if (k.size() < 3) return 0.0;
  const auto [lo, hi] = std::minmax_element(k.begin() + 1, k.end());
  return (*hi - *lo) / k[1];
}

// Full-grid fits shared by several criteria, computed on first use.
struct FitSummary {
  std::vector<double> stiffness;
  ErrorReport errors;
};

class FitCache {
 public:
  const FitSummary& get(const std::string& preset, std::size_t n) {
    const auto key = std::make_pair(preset, n);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const Preset p = find_preset(preset);
    FitOptions o;
    o.threads = 0;
    const FitReport r = make_report(fit(p.spec, n, LoadGrid(p.grid), o), p.spec.length);
    return cache_[key] = FitSummary{r.fit.model.stiffness, r.errors};
  }

 private:
  std::map<std::pair<std::string, std::size_t>, FitSummary> cache_;
};

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- criteria -----------------------------------------------------------------

Outcome continuum_oracle() {
  Outcome o;
  const double ei = catheter_flexural_rigidity(), s = 50.0, mt = 0.25;
  const auto sol = solve_deflection({s, StiffnessProfile::constant(ei), CurvatureProfile::straight()}, {0, 0, mt},
                                    kOracleGrid);
  const double th = mt * s / ei, r = ei / mt;
  const double moment_err =
      std::max({rel(sol.tip().x, r * std::sin(th)), rel(sol.tip().y, r * (1 - std::cos(th))), rel(sol.tip().theta, th)});

  const auto arc = solve_deflection(find_preset("ctr_inner").spec, {}, kOracleGrid);
  const double arc_err = std::max(
      {rel(arc.tip().x, 27 * std::sin(1.0)), rel(arc.tip().y, 27 * (1 - std::cos(1.0))), rel(arc.tip().theta, 1.0)});
  o.pass = moment_err < kMomentArcTol && arc_err < kRestArcTol;
  o.details.push_back(fmt::format("pure-moment tip rel err {:.2e} (< {:.0e}); unloaded arc tip rel err {:.2e} (< {:.0e})",
                                  moment_err, kMomentArcTol, arc_err, kRestArcTol));
  return o;
}

Outcome stiffness_table(FitCache& cache) {
  Outcome o;
  o.pass = true;
  const double ei = ctr_inner_flexural_rigidity(), s = 27.0;
  for (std::size_t d = 0; d < kDofs.size(); ++d) {
    const std::size_t n = kDofs[d];
    const auto& k = cache.get("ctr_inner", n).stiffness;
    const double linear = ei * static_cast<double>(n) / s;
    double worst = 0.0;
    for (std::size_t i = 1; i < n; ++i) worst = std::max(worst, rel(k[i], linear));
    const double k1 = k[0] / 1000.0;
    const double k1_err = rel(k1, kReferenceK1[d]);
    const bool ok = worst <= kStiffnessTol && k1_err <= kStiffnessTol;
    o.pass = o.pass && ok;
    o.details.push_back(fmt::format("n={:2}: k1={:.4f} vs {:.4f} ({:+.1f}%), max |k_i - EI n/S|/(EI n/S) = {:.2f}% {}", n,
                                    k1, kReferenceK1[d], 100 * (k1 / kReferenceK1[d] - 1), 100 * worst, ok ? "ok" : "OUT"));
  }
  return o;
}

Outcome catheter_table(FitCache& cache) {
  Outcome o;
  o.pass = true;
  const std::vector<std::pair<std::size_t, std::array<double, 2>>> refs{{3, {0.0019, 0.0009}}, {20, {0.0116, 0.0057}}};
  for (const auto& [n, ref] : refs) {
    const auto& k = cache.get("catheter", n).stiffness;
    const double k1 = k[0] / 1000.0, k2 = k[1] / 1000.0;
    const bool ok = rel(k1, ref[0]) <= kCatheterTol && rel(k2, ref[1]) <= kCatheterTol;
    o.pass = o.pass && ok;
    o.details.push_back(fmt::format("n={:2}: (k1, k2) = ({:.5f}, {:.5f}) vs ({:.4f}, {:.4f}): {:+.1f}%, {:+.1f}% {}", n,
                                    k1, k2, ref[0], ref[1], 100 * (k1 / ref[0] - 1), 100 * (k2 / ref[1] - 1),
                                    ok ? "ok" : "OUT"));
  }
  return o;
}

Outcome two_value(FitCache& cache) {
  Outcome o;
  o.pass = true;
  for (const std::string preset : {"catheter", "ctr_inner", "ctr_variable_curvature"}) {
    std::string line = preset + ":";
    for (std::size_t n : kDofs) {
      if (preset == "ctr_variable_curvature" && n == 3) {
        line += " n=3 exempt;";
        continue;
      }
      const double spread = spread_over_k2(cache.get(preset, n).stiffness);
      const bool ok = spread < kTwoValueTol;
      o.pass = o.pass && ok;
      line += fmt::format(" n={} {:.2e}{};", n, spread, ok ? "" : "(OUT)");
    }
    o.details.push_back(line);
  }
  const Preset vl = find_preset("ctr_variable_length");
  for (std::size_t n : vl.dofs) {
    FitOptions opts;
    opts.threads = 0;
    const double spread = spread_over_k2(fit(vl.spec, n, LoadGrid(vl.grid), opts).model.stiffness);
    const bool ok = spread < kTwoValueTol;
    o.pass = o.pass && ok;
    o.details.push_back(fmt::format("ctr_variable_length: n={} {:.2e}{}", n, spread, ok ? "" : " (OUT)"));
  }
  o.details.push_back(fmt::format("threshold: spread of k2..kn below {:.1e} of k2", kTwoValueTol));
  return o;
}

Outcome anomaly(FitCache& cache) {
  Outcome o;
  const auto& k3 = cache.get("ctr_variable_curvature", 3).stiffness;
  const double gap = std::abs(k3[2] - k3[1]) / k3[1];
  bool rest_ok = true;
  std::string rest;
  for (std::size_t n : {4, 10, 15, 20}) {
    const double spread = spread_over_k2(cache.get("ctr_variable_curvature", n).stiffness);
    rest_ok = rest_ok && spread < kTwoValueTol;
    rest += fmt::format(" n={} {:.2e};", n, spread);
  }
  o.pass = gap > kAnomalyGap && rest_ok;
  o.details.push_back(fmt::format("n=3: k2={:.5f}, k3={:.5f}, gap {:.2f}% (need > {:.0f}%)", k3[1] / 1000, k3[2] / 1000,
                                  100 * gap, 100 * kAnomalyGap));
  o.details.push_back("n>=4 spread:" + rest + (rest_ok ? " ok" : " OUT"));
  return o;
}

Outcome error_trends(FitCache& cache) {
  Outcome o;
  bool trend_ok = true, abs_ok = true;
  for (const auto& [preset, ref] : kReferenceErrors) {
    const bool straight = preset.rfind("catheter", 0) == 0;
    for (int m = 0; m < 6; ++m) {
      const bool exempt_trend = preset == "catheter_nonuniform_ei" && (m == 4 || m == 5);
      std::vector<std::optional<double>> v;
      for (std::size_t n : kDofs) v.push_back(metric(cache.get(preset, n).errors, m));
      bool decreasing = true;
      for (std::size_t i = 1; i < v.size(); ++i) decreasing = decreasing && v[i] && v[i - 1] && *v[i] < *v[i - 1];
      // Straight members have no rest tip angle; their angle error uses a substituted normaliser.
      const bool abs_checked = !(straight && m == 2);
      double worst = 1.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i]) continue;
        const double ratio = *v[i] / ref.rows[static_cast<std::size_t>(m)][i];
        worst = std::max({worst, ratio, 1.0 / ratio});
      }
      const bool within = worst <= kReferenceFactor;
      if (!exempt_trend) trend_ok = trend_ok && decreasing;
      if (abs_checked) abs_ok = abs_ok && within;
      std::string vals;
      for (const auto& x : v) vals += x ? fmt::format(" {:.4f}", *x) : std::string(" N/A");
      o.details.push_back(fmt::format("{:<22} {:<7}:{} | trend {} | worst factor vs reference {:.3g}{}", preset,
                                      kMetricNames[m], vals,
                                      exempt_trend ? (decreasing ? "dec (exempt)" : "not dec (exempt)")
                                                   : (decreasing ? "dec" : "NOT DEC"),
                                      worst, abs_checked ? (within ? "" : " (OUT)") : " (trend-only)"));
    }
  }
  o.pass = trend_ok && abs_ok;
  o.details.push_back(fmt::format("trend over n in {{3,4,10,15,20}}: {}; absolute within x{:.0f}: {}",
                                  trend_ok ? "ok" : "FAIL", kReferenceFactor, abs_ok ? "ok" : "FAIL"));
  return o;
}

Outcome optimality() {
  Outcome o;
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_scan = 0.0, worst_grad = 0.0;
  bool ok = true;
  for (int inst = 0; inst < kOptimalityInstances; ++inst) {
    const std::size_t n = 1 + static_cast<std::size_t>(u(gen) * 5);
    const std::size_t count = 2 + static_cast<std::size_t>(u(gen) * 49);
    std::vector<FitCase> cases(count);
    std::vector<double> truth(n);
    for (auto& k : truth) k = 0.5 + 20 * u(gen);
    for (auto& c : cases) {
      c.delta_phi.resize(n);
      c.torque.resize(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        c.delta_phi[i] = u(gen) - 0.5;
        c.torque(static_cast<Eigen::Index>(i)) = truth[i] * c.delta_phi[i] + 0.3 * (u(gen) - 0.5);
      }
    }
    std::vector<double> k(n);
    for (std::size_t i = 0; i < n; ++i) k[i] = optimal_stiffness(cases, i);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(k[i] > 0)) continue;
      const double step = 2 * k[i] / static_cast<double>(kScanSamples);
      double best = std::numeric_limits<double>::infinity(), best_k = 0;
      auto trial = k;
      for (std::size_t s = 0; s <= kScanSamples; ++s) {
        trial[i] = step * static_cast<double>(s);
        const double e = force_cost(cases, trial).per_joint[i];
        if (e < best) {
          best = e;
          best_k = trial[i];
        }
      }
      const double scan_err = std::abs(best_k - k[i]) / step;
      worst_scan = std::max(worst_scan, scan_err);
      const double h = 1e-4 * k[i];
      auto plus = k, minus = k;
      plus[i] += h;
      minus[i] -= h;
      const double grad = (force_cost(cases, plus).total - force_cost(cases, minus).total) / (2 * h);
      worst_grad = std::max(worst_grad, std::abs(grad));
      ok = ok && scan_err <= 1.0 && std::abs(grad) < kGradientTol;
    }
  }
  o.pass = ok;
  o.details.push_back(fmt::format("{} instances: worst |k_scan - k| = {:.2f} scan steps (<= 1), worst |dE_f/dk| = {:.2e} (< {:.0e})",
                                  kOptimalityInstances, worst_scan, worst_grad, kGradientTol));
  return o;
}

Outcome jacobian_fd() {
  Outcome o;
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int p = 0; p < kJacobianPairs; ++p) {
    const std::size_t n = 1 + static_cast<std::size_t>(u(gen) * 20);
    PRBModel m;
    JointState s;
    for (std::size_t i = 0; i < n; ++i) {
      m.lengths.push_back(0.2 + 5 * u(gen));
      m.stiffness.push_back(1.0);
      m.rest_angles.push_back(0.0);
      s.phi.push_back(2 * std::numbers::pi * (u(gen) - 0.5));
    }
    m.tip_offset = u(gen) - 0.5;
    const Jacobian j = jacobian(m, s);
    for (std::size_t c = 0; c < n; ++c) {
      JointState a = s, b = s;
      a.phi[c] += kJacobianStep;
      b.phi[c] -= kJacobianStep;
      const TipPose pa = forward_kinematics(m, a), pb = forward_kinematics(m, b);
      const Eigen::Vector3d fd{(pa.x - pb.x), (pa.y - pb.y), (pa.theta - pb.theta)};
      worst = std::max(worst, (fd / (2 * kJacobianStep) - j.col(static_cast<Eigen::Index>(c))).cwiseAbs().maxCoeff());
    }
  }
  o.pass = worst < kJacobianTol;
  o.details.push_back(fmt::format("{} random pairs, step {:.0e} rad: max entry error {:.2e} (< {:.0e})", kJacobianPairs,
                                  kJacobianStep, worst, kJacobianTol));
  return o;
}

Outcome power_law() {
  Outcome o;
  std::vector<double> s{12, 15, 18, 21, 24, 27}, k;
  for (double x : s) k.push_back(5.0 * std::pow(x, -1.0));
  const PowerLawFit exact = power_law_fit(s, k);
  const double exact_err = std::max(std::abs(exact.kappa - 5.0), std::abs(exact.sigma - 1.0));

  const Preset p = find_preset("ctr_variable_length");
  FitOptions opts;
  opts.threads = 0;
  const std::size_t n = p.dofs.front();
  const auto pts = sweep_lengths(p.spec, n, p.sweep_lengths, LoadGrid(p.grid), opts);
  std::vector<double> len, k1, k2;
  for (const auto& pt : pts) {
    len.push_back(pt.length);
    k1.push_back(pt.stiffness[0]);
    k2.push_back(pt.stiffness[1]);
  }
  bool dec = true;
  for (std::size_t i = 1; i < pts.size(); ++i) dec = dec && k1[i] < k1[i - 1] && k2[i] < k2[i - 1];
  const PowerLawFit law2 = power_law_fit(len, k2);
  const PowerLawFit law1 = power_law_fit(len, k1);
  const double kappa_ref = static_cast<double>(n) * ctr_inner_flexural_rigidity();
  o.pass = exact_err < kPowerLawExactTol && law2.sigma >= kSigmaLo && law2.sigma <= kSigmaHi && dec;
  o.details.push_back(fmt::format("synthetic k = 5 s^-1: max parameter error {:.2e} (< {:.0e})", exact_err,
                                  kPowerLawExactTol));
  o.details.push_back(fmt::format("{}-DoF sweep over S = {}: sigma(k2) = {:.4f} in [{}, {}], kappa(k2) = {:.4g} (n EI = {:.4g}), sigma(k1) = {:.4f}",
                                  n, fmt::join(p.sweep_lengths, "/"), law2.sigma, kSigmaLo, kSigmaHi, law2.kappa,
                                  kappa_ref, law1.sigma));
  o.details.push_back(fmt::format("k1(S), k2(S) strictly decreasing: {}", dec ? "yes" : "NO"));
  return o;
}

Outcome segment_sweep() {
  Outcome o;
  const Preset p = find_preset("catheter");
  FitOptions opts;
  opts.threads = 0;
  const auto rows = sweep_segment_combinations(p.spec, LoadGrid(p.reduced_grid), p.sweep_resolution, opts);
  std::size_t best = 0, equal = rows.size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& e = rows[r].errors.position;
    const auto& b = rows[best].errors.position;
    if (e.e_x + e.e_y < b.e_x + b.e_y) best = r;
    const auto& l = rows[r].lengths;
    if (std::abs(l[0] - l[1]) < 1e-9 && std::abs(l[1] - l[2]) < 1e-9) equal = r;
  }
  bool rho_ok = true;
  std::string rhos;
  for (std::size_t j = 0; j < 3; ++j) {
    std::vector<double> l, k;
    for (const auto& r : rows) {
      l.push_back(r.lengths[j]);
      k.push_back(r.stiffness[j]);
    }
    const double rho = spearman(l, k);
    rho_ok = rho_ok && rho > kSpearmanMin;
    rhos += fmt::format(" joint {} rho = {:+.3f};", j + 1, rho);
  }
  const bool equal_min = equal < rows.size() && best == equal;
  o.pass = equal_min && rho_ok;
  const auto& bl = rows[best].lengths;
  o.details.push_back(fmt::format("{} rows at resolution {} (reduced grid); min e_x+e_y at ({:.3f}, {:.3f}, {:.3f}){}",
                                  rows.size(), p.sweep_resolution, bl[0], bl[1], bl[2],
                                  equal_min ? " = equal-length row" : " != equal-length row"));
  if (equal < rows.size()) {
    const auto& e = rows[equal].errors.position;
    const auto& b = rows[best].errors.position;
    o.details.push_back(fmt::format("equal-length e_x+e_y = {:.5f}, best = {:.5f}", e.e_x + e.e_y, b.e_x + b.e_y));
  }
  o.details.push_back(fmt::format("Spearman(l_i, k_i):{} need > {}", rhos, kSpearmanMin));
  return o;
}

Outcome chord_gap() {
  Outcome o;
  const Preset p = find_preset("ctr_inner");
  const double psi = 156.0 * std::numbers::pi / 180.0;
  const LoadGrid loads({LoadGridSpec::Kind::Polar, {AxisRange{0.01, 0.1, 2}, AxisRange{psi, psi, 1}, AxisRange{0, 0, 1}}});
  const std::vector<std::size_t> ns{3, 10, 30};
  bool ok = true;
  for (std::size_t q = 0; q < loads.size(); ++q) {
    std::vector<double> gaps;
    for (std::size_t n : ns) {
      const FitResult r = fit(p.spec, n, loads);
      const auto& c = r.cases[q];
      gaps.push_back(std::hypot(c.continuum_tip.x - c.prb_tip.x, c.continuum_tip.y - c.prb_tip.y));
    }
    // Least-squares slope of log gap against log n.
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      mx += std::log(static_cast<double>(ns[i]));
      my += std::log(gaps[i]);
    }
    mx /= 3;
    my /= 3;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double dx = std::log(static_cast<double>(ns[i])) - mx;
      sxy += dx * (std::log(gaps[i]) - my);
      sxx += dx * dx;
    }
    const double slope = -sxy / sxx;
    const bool slope_ok = std::abs(slope - kGapSlope) <= kGapSlopeTol;
    const bool small_ok = gaps.back() < kGapAt30;
    ok = ok && slope_ok && small_ok;
    o.details.push_back(fmt::format("f = {:.0f} mN at 156 deg: tip gap n=3/10/30 = {:.3e}/{:.3e}/{:.3e} mm, slope {:.3f} (2 +/- 0.2){}, n=30 gap {} 1e-3 mm",
                                    loads.wrench(q).magnitude() * 1000, gaps[0], gaps[1], gaps[2], slope,
                                    slope_ok ? "" : " OUT", small_ok ? "<" : ">="));
  }
  o.pass = ok;
  return o;
}

Outcome determinism(const fs::path& cli, const fs::path& work) {
  Outcome o;
  if (cli.empty() || !fs::exists(cli)) {
    o.details.push_back("CLI executable not found; pass --cli PATH");
    return o;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  // On a single-core host "all hardware threads" is one worker; force a real
  // thread pool so the parallel path is exercised.
  const unsigned wide = hw > 1 ? 0u : 4u;
  const std::vector<std::pair<std::string, unsigned>> runs{{"serial", 1u}, {"parallel", wide}};
  for (const auto& [name, threads] : runs) {
    const fs::path dir = work / name;
    fs::remove_all(dir);
    const std::string cmd = fmt::format("\"{}\" fit --preset ctr_inner --threads {} --quiet --out \"{}\"", cli.string(),
                                        threads, dir.string());
    if (std::system(cmd.c_str()) != 0) {
      o.details.push_back("command failed: " + cmd);
      return o;
    }
  }
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(work / "serial")) names.insert(e.path().filename().string());
  std::set<std::string> other;
  for (const auto& e : fs::directory_iterator(work / "parallel")) other.insert(e.path().filename().string());
  bool same = names == other && !names.empty();
  std::size_t bytes = 0;
  for (const auto& n : names) {
    if (!other.count(n)) continue;
    const std::string a = read_file(work / "serial" / n), b = read_file(work / "parallel" / n);
    bytes += a.size();
    if (a != b) {
      same = false;
      o.details.push_back("differs: " + n);
    }
  }
  o.pass = same;
  o.details.push_back(fmt::format("fit --preset ctr_inner with --threads 1 vs --threads {} ({} hardware threads): {} files, {} bytes, {}",
                                  wide, hw, names.size(), bytes, same ? "byte-identical" : "DIFFERENT"));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path cli, work = fs::temp_directory_path() / "prb_acceptance";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) cli = argv[++i];
    else if (a == "--work" && i + 1 < argc) work = argv[++i];
    else if (a == "--only" && i + 1 < argc) {
      for (double v : parse_number_list(argv[++i], "--only")) only.insert(static_cast<int>(v));
    } else {
      fmt::print(stderr, "usage: acceptance [--cli PATH] [--work DIR] [--only N[,N...]]\n");
      return 2;
    }
  }

  FitCache cache;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"continuum solver oracle", continuum_oracle},
      {"CTR stiffness table (k2..kn = EI n/S, k1 vs reference, +/-5%)", [&] { return stiffness_table(cache); }},
      {"catheter stiffness table (n = 3, 20, +/-15%)", [&] { return catheter_table(cache); }},
      {"two-value stiffness structure (< 0.1%)", [&] { return two_value(cache); }},
      {"variable-curvature 3-DoF anomaly", [&] { return anomaly(cache); }},
      {"error monotonicity and reference magnitudes (full grids)", [&] { return error_trends(cache); }},
      {"closed-form stiffness optimality", optimality},
      {"Jacobian finite-difference check", jacobian_fd},
      {"power law in member length", power_law},
      {"segment-combination sweep", segment_sweep},
      {"chain tip gap O(n^-2)", chord_gap},
      {"determinism across thread counts", [&] { return determinism(cli, work); }},
  };

  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.details.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print("{} criterion {:2}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, secs);
    for (const auto& d : o.details) fmt::print("        {}\n", d);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  fmt::print("{} criteria failed ({:.1f} s)\n", failed, total);
  return failed == 0 ? 0 : 1;
}
