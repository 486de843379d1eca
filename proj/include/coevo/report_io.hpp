#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "coevo/basins.hpp"
#include "coevo/cycles.hpp"
#include "coevo/errors.hpp"
#include "coevo/game_model.hpp"
#include "coevo/metrics.hpp"
#include "coevo/stability.hpp"

namespace coevo {

using Json = nlohmann::ordered_json;

/// Fixed float formatting shared by every report: 12 significant digits.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

/// The double closest to the 12-significant-digit rendering of `v`, so JSON
/// output carries the same precision as CSV output.
inline Json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

inline Json to_json(const PopulationState& s) {
  return Json::array({json_number(s.x1), json_number(s.yG1), json_number(s.yB1)});
}

inline Json to_json(const GameParameters& p) {
  Json j;
  j["rho"] = json_number(p.rho);
  j["lambda"] = json_number(p.lambda);
  j["b"] = json_number(p.b);
  j["c_I"] = json_number(p.c_I);
  j["c_F"] = json_number(p.c_F);
  j["p_G"] = json_number(p.p_G);
  j["r"] = json_number(p.r);
  return j;
}

inline Json to_json(const FixedPointReport& f) {
  Json j;
  j["location"] = to_json(f.location);
  j["kind"] = std::string(to_string(f.kind));
  Json eigs = Json::array();
  for (const auto& e : f.eigenvalues)
    eigs.push_back(Json::array({json_number(e.real()), json_number(e.imag())}));
  j["eigenvalues"] = std::move(eigs);
  j["classification"] = std::string(to_string(f.classification));
  j["label"] = f.label;
  return j;
}

inline Json to_json(std::span<const FixedPointReport> points) {
  Json arr = Json::array();
  for (const auto& p : points) arr.push_back(to_json(p));
  return arr;
}

inline Json to_json(const BasinReport& r) {
  Json j;
  j["scenario"] = std::string(to_string(r.scenario));
  j["params"] = to_json(r.params);
  j["grid"] = {{"points_per_axis", r.n_per_axis}, {"offset", json_number(r.offset)}};
  j["total"] = r.total;
  j["retried"] = r.retried;
  j["integration_failures"] = r.integration_failures;
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"endpoint", e.label},
                       {"kind", std::string(to_string(e.kind))},
                       {"count", e.count},
                       {"fraction", json_number(e.fraction)}});
  }
  j["endpoints"] = std::move(entries);
  return j;
}

inline Json to_json(const CycleReport& c) {
  Json j;
  j["period"] = json_number(c.period);
  j["crossings"] = c.crossings;
  j["time_average"] = to_json(c.time_average);
  j["amplitude"] = Json::array(
      {json_number(c.amplitude[0]), json_number(c.amplitude[1]), json_number(c.amplitude[2])});
  j["amplitude_trend"] = json_number(c.amplitude_trend);
  j["analytic_center"] = c.analytic_center ? to_json(*c.analytic_center) : Json(nullptr);
  j["center_distance"] = c.center_distance ? json_number(*c.center_distance) : Json(nullptr);
  return j;
}

inline Json to_json(const CycleCensus& c) {
  Json j;
  j["scenario"] = std::string(to_string(c.scenario));
  j["params"] = to_json(c.params);
  j["seed"] = c.seed;
  j["n_random"] = c.n_random;
  j["cycles"] = c.cycles;
  j["fraction"] = json_number(c.fraction);
  j["integration_failures"] = c.integration_failures;
  j["analytic_center"] = c.analytic_center ? to_json(*c.analytic_center) : Json(nullptr);
  Json reports = Json::array();
  for (std::size_t i = 0; i < c.reports.size(); ++i) {
    Json r = to_json(c.reports[i]);
    r["initial_state"] = to_json(c.initial_states[i]);
    reports.push_back(std::move(r));
  }
  j["reports"] = std::move(reports);
  return j;
}

inline Json to_json(const DominanceReport& d) {
  auto row = [](const std::array<double, 3>& v) {
    return Json::array({json_number(v[0]), json_number(v[1]), json_number(v[2])});
  };
  Json j;
  j["scenario"] = std::string(to_string(d.scenario));
  j["low_vs_good"] = row(d.low_vs_good);
  j["medium_vs_good"] = row(d.medium_vs_good);
  j["low_vs_bad"] = row(d.low_vs_bad);
  j["medium_vs_bad"] = row(d.medium_vs_bad);
  j["equal_vs_good"] = d.equal_vs_good;
  j["dominated_vs_bad"] = d.dominated_vs_bad;
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline std::string trajectory_csv_header(bool with_metrics) {
  std::string h = "t,x1,x2,yG1,yG2,yB1,yB2";
  if (with_metrics) h += ",tp,tn,fp,fn,social_cost";
  return h;
}

/// One row per recorded sample; metric columns are appended when `with_metrics`.
inline std::string trajectory_csv(const Trajectory& traj, bool with_metrics) {
  std::string out = trajectory_csv_header(with_metrics) + "\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj.states[k];
    const double cols[] = {traj.times[k], s.x1, s.x2(), s.yG1, s.yG2(), s.yB1, s.yB2()};
    for (std::size_t c = 0; c < std::size(cols); ++c) {
      if (c) out += ',';
      out += format_number(cols[c]);
    }
    if (with_metrics) {
      const auto f = outcome_frequencies(s, traj.scenario, traj.params);
      for (double v : {f.tp, f.tn, f.fp, f.fn, social_cost(s).value}) {
        out += ',';
        out += format_number(v);
      }
    }
    out += '\n';
  }
  return out;
}

inline Json trajectory_json(const Trajectory& traj, bool with_metrics) {
  Json j;
  j["scenario"] = std::string(to_string(traj.scenario.kind));
  j["params"] = to_json(traj.params);
  Json samples = Json::array();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj.states[k];
    Json row;
    row["t"] = json_number(traj.times[k]);
    row["x1"] = json_number(s.x1);
    row["yG1"] = json_number(s.yG1);
    row["yB1"] = json_number(s.yB1);
    if (with_metrics) {
      const auto f = outcome_frequencies(s, traj.scenario, traj.params);
      row["tp"] = json_number(f.tp);
      row["tn"] = json_number(f.tn);
      row["fp"] = json_number(f.fp);
      row["fn"] = json_number(f.fn);
      row["social_cost"] = json_number(social_cost(s).value);
    }
    samples.push_back(std::move(row));
  }
  j["samples"] = std::move(samples);
  return j;
}

/// Heatmap-ready rows `rho_over_lambda,r,endpoint,fraction`, one per
/// (ratio, rate, endpoint). Failed cells emit a single `error` row.
inline std::string sweep_csv(const BasinSweep& sweep) {
  std::string out = "rho_over_lambda,r,endpoint,fraction\n";
  for (const auto& row : sweep.cells) {
    for (const auto& cell : row) {
      const std::string prefix =
          format_number(cell.rho_over_lambda) + "," + format_number(cell.r) + ",";
      if (!cell.report) {
        out += prefix + "error,nan\n";
        continue;
      }
      for (const auto& e : cell.report->entries)
        out += prefix + e.label + "," + format_number(e.fraction) + "\n";
    }
  }
  return out;
}

inline Json to_json(const BasinSweep& sweep) {
  Json j;
  j["scenario"] = std::string(to_string(sweep.scenario));
  j["base_params"] = to_json(sweep.base_params);
  Json cells = Json::array();
  for (const auto& row : sweep.cells) {
    for (const auto& cell : row) {
      Json c;
      c["rho_over_lambda"] = json_number(cell.rho_over_lambda);
      c["r"] = json_number(cell.r);
      c["report"] = cell.report ? to_json(*cell.report) : Json(nullptr);
      if (!cell.error.empty()) c["error"] = cell.error;
      cells.push_back(std::move(c));
    }
  }
  j["cells"] = std::move(cells);
  return j;
}

inline std::string basin_csv(const BasinReport& r) {
  std::string out = "endpoint,kind,count,fraction\n";
  for (const auto& e : r.entries)
    out += e.label + "," + std::string(to_string(e.kind)) + "," + std::to_string(e.count) + "," +
           format_number(e.fraction) + "\n";
  return out;
}

inline std::string fixed_points_csv(std::span<const FixedPointReport> points) {
  std::string out = "label,kind,x1,yG1,yB1,classification,re1,im1,re2,im2,re3,im3\n";
  for (const auto& p : points) {
    out += p.label + "," + std::string(to_string(p.kind)) + "," + format_number(p.location.x1) + "," +
           format_number(p.location.yG1) + "," + format_number(p.location.yB1) + "," +
           std::string(to_string(p.classification));
    for (const auto& e : p.eigenvalues) out += "," + format_number(e.real()) + "," + format_number(e.imag());
    out += "\n";
  }
  return out;
}

inline std::string census_csv(const CycleCensus& c) {
  std::string out = "x1_0,yG1_0,yB1_0,period,crossings,avg_x1,avg_yG1,avg_yB1,amplitude_trend\n";
  for (std::size_t i = 0; i < c.reports.size(); ++i) {
    const auto& s = c.initial_states[i];
    const auto& r = c.reports[i];
    out += format_number(s.x1) + "," + format_number(s.yG1) + "," + format_number(s.yB1) + "," +
           format_number(r.period) + "," + std::to_string(r.crossings) + "," +
           format_number(r.time_average.x1) + "," + format_number(r.time_average.yG1) + "," +
           format_number(r.time_average.yB1) + "," + format_number(r.amplitude_trend) + "\n";
  }
  return out;
}

enum class Format { Csv, Json };

inline std::optional<Format> parse_format(std::string_view s) noexcept {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  return std::nullopt;
}

inline std::string render(const Trajectory& t, Format f) {
  return f == Format::Csv ? trajectory_csv(t, false) : dump(trajectory_json(t, false));
}
inline std::string render(const AnnotatedTrajectory& t, Format f) {
  return f == Format::Csv ? trajectory_csv(t.trajectory, true) : dump(trajectory_json(t.trajectory, true));
}
inline std::string render(const BasinReport& r, Format f) {
  return f == Format::Csv ? basin_csv(r) : dump(to_json(r));
}
inline std::string render(const BasinSweep& s, Format f) {
  return f == Format::Csv ? sweep_csv(s) : dump(to_json(s));
}
inline std::string render(std::span<const FixedPointReport> pts, Format f) {
  return f == Format::Csv ? fixed_points_csv(pts) : dump(to_json(pts));
}
inline std::string render(const std::vector<FixedPointReport>& pts, Format f) {
  return render(std::span<const FixedPointReport>(pts), f);
}
inline std::string render(const CycleCensus& c, Format f) {
  return f == Format::Csv ? census_csv(c) : dump(to_json(c));
}

/// Writes `content` to `path`; "-" or an empty path means standard output.
inline void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

template <class Report>
void emit_report(const Report& report, Format format, const std::string& path) {
  write_output(path, render(report, format));
}

}  // namespace coevo
