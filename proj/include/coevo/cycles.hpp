#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "coevo/dynamics.hpp"
#include "coevo/parallel.hpp"
#include "coevo/stability.hpp"

namespace coevo {

/// Period, averages and extent of a periodic orbit found in a trajectory.
///
/// Detection is heuristic: it reports recurrent motion with a stable period
/// and a non-negligible amplitude, not a proof that the orbit closes.
struct CycleReport {
  double period = 0.0;
  std::size_t crossings = 0;
  PopulationState time_average;
  Vec3 amplitude{};
  /// x1 amplitude over the last detected period divided by that over the
  /// first; values near 1 indicate a closed orbit, below 1 a slow inward spiral.
  double amplitude_trend = 1.0;
  std::optional<PopulationState> analytic_center;
  std::optional<double> center_distance;
};

struct CycleDetection {
  double window_fraction = 0.5;
  double tol_corner = 1e-3;
  double max_period_spread = 0.05;
  std::size_t min_crossings = 3;
};

namespace detail {

/// Integral of the piecewise-linear interpolant of `traj` over [ta, tb],
/// restricted to samples from index `first` on.
inline Vec3 integrate_linear(const Trajectory& traj, std::size_t first, double ta, double tb) {
  Vec3 acc{};
  for (std::size_t k = first; k + 1 < traj.size(); ++k) {
    const double t0 = traj.times[k], t1 = traj.times[k + 1];
    const double lo = std::max(t0, ta), hi = std::min(t1, tb);
    if (hi <= lo) continue;
    const Vec3 a = traj.states[k].as_vec(), b = traj.states[k + 1].as_vec();
    auto at = [&](double t, std::size_t i) { return a[i] + (b[i] - a[i]) * (t - t0) / (t1 - t0); };
    for (std::size_t i = 0; i < 3; ++i) acc[i] += 0.5 * (at(lo, i) + at(hi, i)) * (hi - lo);
  }
  return acc;
}

inline double x1_amplitude(const Trajectory& traj, std::size_t first, double ta, double tb) {
  double lo = 1.0, hi = 0.0;
  for (std::size_t k = first; k < traj.size(); ++k) {
    if (traj.times[k] < ta || traj.times[k] > tb) continue;
    lo = std::min(lo, traj.states[k].x1);
    hi = std::max(hi, traj.states[k].x1);
  }
  return hi > lo ? hi - lo : 0.0;
}

}  // namespace detail

/// Looks for a periodic orbit in the final `window_fraction` of `traj`, using
/// upward crossings of the plane x1 = mean(x1) as a Poincare section.
inline std::optional<CycleReport> detect_cycle(const Trajectory& traj,
                                               const CycleDetection& opts = {}) {
  if (traj.size() < 4) return std::nullopt;
  const double t0 = traj.times.front(), t1 = traj.times.back();
  const double t_start = t1 - opts.window_fraction * (t1 - t0);
  const auto first = static_cast<std::size_t>(
      std::lower_bound(traj.times.begin(), traj.times.end(), t_start) - traj.times.begin());
  if (traj.size() - first < 4) return std::nullopt;

  const double span = traj.times.back() - traj.times[first];
  if (!(span > 0.0)) return std::nullopt;
  const double mean_x1 = detail::integrate_linear(traj, first, traj.times[first], t1)[0] / span;

  std::vector<double> hits;
  for (std::size_t k = first; k + 1 < traj.size(); ++k) {
    const double a = traj.states[k].x1, b = traj.states[k + 1].x1;
    if (a < mean_x1 && b >= mean_x1) {
      const double u = (mean_x1 - a) / (b - a);
      hits.push_back(traj.times[k] + u * (traj.times[k + 1] - traj.times[k]));
    }
  }
  if (hits.size() < opts.min_crossings) return std::nullopt;

  const double period = (hits.back() - hits.front()) / static_cast<double>(hits.size() - 1);
  if (!(period > 0.0)) return std::nullopt;
  for (std::size_t k = 1; k < hits.size(); ++k) {
    if (std::abs((hits[k] - hits[k - 1]) - period) > opts.max_period_spread * period)
      return std::nullopt;
  }

  Vec3 lo{1.0, 1.0, 1.0}, hi{0.0, 0.0, 0.0};
  for (std::size_t k = first; k < traj.size(); ++k) {
    if (traj.times[k] < hits.front() || traj.times[k] > hits.back()) continue;
    const Vec3 v = traj.states[k].as_vec();
    for (std::size_t i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  CycleReport rep;
  for (std::size_t i = 0; i < 3; ++i) rep.amplitude[i] = std::max(0.0, hi[i] - lo[i]);
  if (!(*std::max_element(rep.amplitude.begin(), rep.amplitude.end()) > 10.0 * opts.tol_corner))
    return std::nullopt;

  const Vec3 integral = detail::integrate_linear(traj, first, hits.front(), hits.back());
  const double duration = hits.back() - hits.front();
  Vec3 avg;
  for (std::size_t i = 0; i < 3; ++i) avg[i] = std::clamp(integral[i] / duration, 0.0, 1.0);

  rep.period = period;
  rep.crossings = hits.size();
  rep.time_average = PopulationState::from_vec(avg);
  const double first_amp = detail::x1_amplitude(traj, first, hits[0], hits[1]);
  const double last_amp = detail::x1_amplitude(traj, first, hits[hits.size() - 2], hits.back());
  rep.amplitude_trend = first_amp > 0.0 ? last_amp / first_amp : 1.0;
  if (traj.scenario.kind == ScenarioKind::Recourse) {
    rep.analytic_center = recourse_center(traj.params);
    if (rep.analytic_center) rep.center_distance = distance(rep.time_average, *rep.analytic_center);
  }
  return rep;
}

inline std::optional<CycleReport> detect_cycle(const Trajectory& traj, double window_fraction) {
  CycleDetection opts;
  opts.window_fraction = window_fraction;
  return detect_cycle(traj, opts);
}

/// Uniform doubles in (0, 1) built from the raw 64-bit engine output, so the
/// sequence for a given seed does not depend on the standard library.
class UnitSampler {
 public:
  explicit UnitSampler(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

 private:
  std::mt19937_64 engine_;
};

struct CensusSettings {
  std::size_t n_random = 200;
  std::uint64_t seed = 1;
  IntegrationSettings integration{50.0, 0.01, 1};
  CycleDetection detection{};
  unsigned threads = 0;
};

struct CycleCensus {
  ScenarioKind scenario = ScenarioKind::Recourse;
  GameParameters params;
  std::uint64_t seed = 0;
  std::size_t n_random = 0;
  std::size_t cycles = 0;
  double fraction = 0.0;
  std::size_t integration_failures = 0;
  std::vector<PopulationState> initial_states;  // of the cycling trajectories
  std::vector<CycleReport> reports;
  std::optional<PopulationState> analytic_center;
};

/// Integrates `n_random` seeded uniform interior starts and counts how many
/// settle on a periodic orbit.
inline CycleCensus cycle_census(const Scenario& scenario, const GameParameters& params,
                                const CensusSettings& cfg = {}) {
  params.validate();
  CycleCensus out;
  out.scenario = scenario.kind;
  out.params = params;
  out.seed = cfg.seed;
  out.n_random = cfg.n_random;
  if (scenario.kind == ScenarioKind::Recourse) out.analytic_center = recourse_center(params);
  if (cfg.n_random == 0) return out;

  UnitSampler sample(cfg.seed);
  std::vector<PopulationState> starts(cfg.n_random);
  for (auto& s : starts) {
    s.x1 = sample();
    s.yG1 = sample();
    s.yB1 = sample();
  }

  const ReplicatorField field(scenario, params);
  struct Outcome {
    std::optional<CycleReport> report;
    bool failed = false;
  };
  std::vector<Outcome> results(starts.size());
  parallel_for(starts.size(), cfg.threads, [&](std::size_t i) {
    try {
      results[i].report = detect_cycle(integrate(starts[i], field, cfg.integration), cfg.detection);
    } catch (const StepInstability&) {
      results[i].failed = true;
    }
  });

  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].failed) ++out.integration_failures;
    if (!results[i].report) continue;
    out.initial_states.push_back(starts[i]);
    out.reports.push_back(*results[i].report);
  }
  out.cycles = out.reports.size();
  out.fraction = static_cast<double>(out.cycles) / static_cast<double>(cfg.n_random);
  return out;
}

}  // namespace coevo
