#pragma once

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "coevo/cycles.hpp"
#include "coevo/dynamics.hpp"
#include "coevo/parallel.hpp"
#include "coevo/stability.hpp"

namespace coevo {

enum class EndpointKind { Corner, FixedLine, InteriorFixed, Cycle, NonConverged };

inline std::string_view to_string(EndpointKind k) noexcept {
  switch (k) {
    case EndpointKind::Corner: return "corner";
    case EndpointKind::FixedLine: return "fixed-line";
    case EndpointKind::InteriorFixed: return "interior-fixed";
    case EndpointKind::Cycle: return "cycle";
    case EndpointKind::NonConverged: return "non-converged";
  }
  return "?";
}

/// Where a trajectory ended up. `label` identifies the attractor: a corner
/// such as "(M,NA,F)", a fixed line such as "(x1,A,I)", an interior point,
/// "cycle" or "non-converged".
struct EndpointClass {
  EndpointKind kind = EndpointKind::NonConverged;
  std::string label = "non-converged";
  std::optional<PopulationState> location;

  friend bool operator==(const EndpointClass& a, const EndpointClass& b) {
    return a.kind == b.kind && a.label == b.label;
  }
};

inline constexpr double kDefaultTolCorner = 1e-3;

namespace detail {

inline std::string point_label(const FixedPointReport& p) {
  if (!p.label.empty() && p.kind != FixedPointKind::Nontrivial) return p.label;
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6f,%.6f,%.6f)", p.location.x1, p.location.yG1,
                p.location.yB1);
  return buf;
}

}  // namespace detail

/// Nearest known fixed point (or fixed line) within `tol_corner` of the final
/// state; failing that, a cycle in the final quarter; else non-converged.
inline EndpointClass classify_endpoint(const Trajectory& traj,
                                       std::span<const FixedPointReport> known,
                                       double tol_corner = kDefaultTolCorner) {
  if (traj.empty()) return {};
  const PopulationState& end = traj.back();

  double best = std::numeric_limits<double>::infinity();
  EndpointClass out;
  for (const auto& p : known) {
    double d = 0.0;
    EndpointClass cand;
    switch (p.kind) {
      case FixedPointKind::Corner:
        d = distance(end, p.location);
        cand = {EndpointKind::Corner, p.label, p.location};
        break;
      case FixedPointKind::LineMember:
        d = FixedLine{p.location.yG1, p.location.yB1, p.label}.distance_to(end);
        cand = {EndpointKind::FixedLine, p.label, end};
        break;
      case FixedPointKind::Interior:
      case FixedPointKind::Nontrivial:
        d = distance(end, p.location);
        cand = {EndpointKind::InteriorFixed, detail::point_label(p), p.location};
        break;
    }
    // Corners are listed first; a line endpoint equal to a corner keeps the corner.
    if (d <= tol_corner && d < best) {
      best = d;
      out = std::move(cand);
    }
  }
  if (best <= tol_corner) return out;

  CycleDetection opts;
  opts.window_fraction = 0.25;
  opts.tol_corner = tol_corner;
  if (detect_cycle(traj, opts)) return {EndpointKind::Cycle, "cycle", std::nullopt};
  return {};
}

struct BasinSettings {
  std::size_t n_per_axis = 20;
  double t_end = 200.0;
  double dt = 0.01;
  std::size_t record_every = 10;
  double tol_corner = kDefaultTolCorner;
  unsigned threads = 0;
};

struct BasinEntry {
  EndpointKind kind = EndpointKind::NonConverged;
  std::string label;
  std::size_t count = 0;
  double fraction = 0.0;
};

/// Attractor shares over a cell-centred grid of initial conditions.
struct BasinReport {
  ScenarioKind scenario = ScenarioKind::Baseline;
  GameParameters params;
  std::size_t n_per_axis = 0;
  double offset = 0.5;  // grid coordinate = (k + offset) / n_per_axis
  std::size_t total = 0;
  std::size_t retried = 0;               // points integrated to twice the horizon
  std::size_t integration_failures = 0;  // counted as non-converged
  std::vector<BasinEntry> entries;       // sorted by (kind, label)

  double fraction(std::string_view label) const noexcept {
    for (const auto& e : entries)
      if (e.label == label) return e.fraction;
    return 0.0;
  }
  std::size_t count(std::string_view label) const noexcept {
    for (const auto& e : entries)
      if (e.label == label) return e.count;
    return 0;
  }
};

inline std::vector<PopulationState> basin_grid(std::size_t n_per_axis) {
  std::vector<PopulationState> pts;
  pts.reserve(n_per_axis * n_per_axis * n_per_axis);
  const double n = static_cast<double>(n_per_axis);
  for (std::size_t i = 0; i < n_per_axis; ++i)
    for (std::size_t j = 0; j < n_per_axis; ++j)
      for (std::size_t k = 0; k < n_per_axis; ++k)
        pts.push_back({(i + 0.5) / n, (j + 0.5) / n, (k + 0.5) / n});
  return pts;
}

inline BasinReport basin_sizes(const Scenario& scenario, const GameParameters& params,
                               const BasinSettings& cfg = {}) {
  if (cfg.n_per_axis < 2) throw InvalidArgument("basin grid needs at least 2 points per axis");
  params.validate();
  const ReplicatorField field(scenario, params);
  const auto known = enumerate_fixed_points(scenario, params);
  const auto grid = basin_grid(cfg.n_per_axis);
  const IntegrationSettings integ{cfg.t_end, cfg.dt, cfg.record_every};

  struct PointResult {
    EndpointClass endpoint;
    bool retried = false;
    bool failed = false;
  };
  std::vector<PointResult> results(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    auto& res = results[i];
    try {
      Trajectory traj = integrate(grid[i], field, integ);
      res.endpoint = classify_endpoint(traj, known, cfg.tol_corner);
      if (res.endpoint.kind == EndpointKind::NonConverged) {
        res.retried = true;
        traj = integrate(traj.back(), field, integ, traj.t_end());
        res.endpoint = classify_endpoint(traj, known, cfg.tol_corner);
      }
    } catch (const StepInstability&) {
      res.failed = true;
      res.endpoint = {};
    }
  });

  BasinReport rep;
  rep.scenario = scenario.kind;
  rep.params = params;
  rep.n_per_axis = cfg.n_per_axis;
  rep.total = grid.size();
  std::map<std::tuple<EndpointKind, std::string>, std::size_t> counts;
  for (const auto& r : results) {
    ++counts[{r.endpoint.kind, r.endpoint.label}];
    rep.retried += r.retried ? 1 : 0;
    rep.integration_failures += r.failed ? 1 : 0;
  }
  for (const auto& [key, n] : counts) {
    rep.entries.push_back({std::get<0>(key), std::get<1>(key), n,
                           static_cast<double>(n) / static_cast<double>(rep.total)});
  }
  return rep;
}

struct SweepCell {
  double rho_over_lambda = 0.0;
  double r = 0.0;
  std::optional<BasinReport> report;
  std::string error;
};

/// Basin reports over a (rho/lambda, r) grid with lambda held at its base
/// value. cells[i][j] pairs ratios[i] with rates[j]; a failing cell records
/// its error and the sweep continues.
struct BasinSweep {
  ScenarioKind scenario = ScenarioKind::Baseline;
  GameParameters base_params;
  std::vector<double> ratios;
  std::vector<double> rates;
  std::vector<std::vector<SweepCell>> cells;
};

inline BasinSweep sweep_basins(const Scenario& scenario, const GameParameters& base_params,
                               std::span<const double> ratios, std::span<const double> rates,
                               const BasinSettings& cfg = {}) {
  BasinSweep out;
  out.scenario = scenario.kind;
  out.base_params = base_params;
  out.ratios.assign(ratios.begin(), ratios.end());
  out.rates.assign(rates.begin(), rates.end());
  for (double ratio : ratios) {
    auto& row = out.cells.emplace_back();
    for (double rate : rates) {
      SweepCell cell{ratio, rate, std::nullopt, {}};
      GameParameters p = base_params;
      p.rho = ratio * base_params.lambda;
      p.r = rate;
      try {
        cell.report = basin_sizes(scenario, p, cfg);
      } catch (const Error& e) {
        cell.error = e.what();
      }
      row.push_back(std::move(cell));
    }
  }
  return out;
}

}  // namespace coevo
