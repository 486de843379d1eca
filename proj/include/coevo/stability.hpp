#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/dynamics.hpp"
#include "coevo/eigen3x3.hpp"
#include "coevo/errors.hpp"
#include "coevo/game_model.hpp"

namespace coevo {

enum class FixedPointKind { Corner, LineMember, Interior, Nontrivial };

enum class Stability { Stable, Unstable, Saddle, CenterOrInconclusive };

inline std::string_view to_string(FixedPointKind k) noexcept {
  switch (k) {
    case FixedPointKind::Corner: return "corner";
    case FixedPointKind::LineMember: return "line-member";
    case FixedPointKind::Interior: return "interior";
    case FixedPointKind::Nontrivial: return "nontrivial";
  }
  return "?";
}

inline std::string_view to_string(Stability s) noexcept {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Saddle: return "saddle";
    case Stability::CenterOrInconclusive: return "center-or-inconclusive";
  }
  return "?";
}

/// Real parts within this margin of zero count as zero.
inline constexpr double kStabilityMargin = 1e-10;

struct FixedPointReport {
  PopulationState location;
  FixedPointKind kind = FixedPointKind::Corner;
  Spectrum eigenvalues{};
  Stability classification = Stability::CenterOrInconclusive;
  std::string label;
  double rhs_norm = 0.0;
};

inline double pg_star(const GameParameters& p) {
  p.validate();
  return p.lambda / (p.lambda + p.rho);
}

inline Stability classify(const Spectrum& eigs) noexcept {
  bool any_pos = false;
  bool any_neg = false;
  bool all_neg = true;
  for (const auto& e : eigs) {
    any_pos = any_pos || e.real() > kStabilityMargin;
    any_neg = any_neg || e.real() < -kStabilityMargin;
    all_neg = all_neg && e.real() < -kStabilityMargin;
  }
  if (all_neg) return Stability::Stable;
  if (any_pos) return any_neg ? Stability::Saddle : Stability::Unstable;
  return Stability::CenterOrInconclusive;
}

/// Closed-form Jacobian of a built-in scenario's replicator system.
inline Mat3 jacobian_analytic(const PopulationState& s, const Scenario& scenario,
                              const GameParameters& p) {
  const double x = s.x1, g = s.yG1, z = s.yB1;
  const double vx = x * (1.0 - x), vg = g * (1.0 - g), vz = z * (1.0 - z);
  const double pB = p.p_B();
  // The Good-user equation is shared by all three built-ins.
  const double good_gap = p.c_I - p.b * (1.0 - x);
  Mat3 J{};
  J[1] = {p.b * vg, (1.0 - 2.0 * g) * good_gap, 0.0};

  switch (scenario.kind) {
    case ScenarioKind::Baseline: {
      const double gap = p.rho - p.rho * p.p_G * (1.0 - g) - (p.lambda + p.rho) * pB * z;
      J[0] = {p.r * (1.0 - 2.0 * x) * gap, p.r * p.rho * p.p_G * vx,
              -p.r * (p.lambda + p.rho) * pB * vx};
      J[2] = {0.0, 0.0, (p.c_I - p.c_F) * (1.0 - 2.0 * z)};
      break;
    }
    case ScenarioKind::ManipulationProof: {
      const double gap = 1.0 - p.p_G * (1.0 - g) - pB * z;
      J[0] = {p.r * p.rho * (1.0 - 2.0 * x) * gap, p.r * p.rho * p.p_G * vx,
              -p.r * p.rho * pB * vx};
      J[2] = {-p.b * vz, 0.0, (p.c_I - p.c_F - p.b * x) * (1.0 - 2.0 * z)};
      break;
    }
    case ScenarioKind::Recourse: {
      const double gap = p.rho * p.p_G * g - p.lambda * pB * z;
      J[0] = {p.r * (1.0 - 2.0 * x) * gap, p.r * p.rho * p.p_G * vx,
              -p.r * p.lambda * pB * vx};
      J[2] = {p.b * vz, 0.0, (p.c_I - p.c_F - p.b * (1.0 - x)) * (1.0 - 2.0 * z)};
      break;
    }
    case ScenarioKind::Custom:
      throw UnsupportedScenario("no closed-form Jacobian for custom scenarios; use jacobian_fd");
  }
  return J;
}

/// Finite-difference Jacobian of the replicator field. Central differences in
/// the interior, second-order one-sided stencils within h of a face.
inline Mat3 jacobian_fd(const PopulationState& s, const ReplicatorField& field, double h = 1e-6) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const Vec3 v = s.as_vec();
  Mat3 J{};
  for (std::size_t col = 0; col < 3; ++col) {
    auto at = [&](double offset) {
      Vec3 w = v;
      w[col] += offset;
      return field(w);
    };
    Vec3 d{};
    if (v[col] - h < 0.0) {
      const Vec3 f0 = at(0.0), f1 = at(h), f2 = at(2.0 * h);
      for (std::size_t r = 0; r < 3; ++r) d[r] = (-3.0 * f0[r] + 4.0 * f1[r] - f2[r]) / (2.0 * h);
    } else if (v[col] + h > 1.0) {
      const Vec3 f0 = at(0.0), f1 = at(-h), f2 = at(-2.0 * h);
      for (std::size_t r = 0; r < 3; ++r) d[r] = (3.0 * f0[r] - 4.0 * f1[r] + f2[r]) / (2.0 * h);
    } else {
      const Vec3 fp = at(h), fm = at(-h);
      for (std::size_t r = 0; r < 3; ++r) d[r] = (fp[r] - fm[r]) / (2.0 * h);
    }
    for (std::size_t r = 0; r < 3; ++r) J[r][col] = d[r];
  }
  return J;
}

inline Mat3 jacobian_fd(const PopulationState& s, const Scenario& scenario,
                        const GameParameters& params, double h = 1e-6) {
  return jacobian_fd(s, ReplicatorField(scenario, params), h);
}

/// Monomorphic label such as "(H,A,F)".
inline std::string corner_label(const PopulationState& s) {
  std::string out = "(";
  out += s.x1 > 0.5 ? "M" : "H";
  out += s.yG1 > 0.5 ? ",NA" : ",A";
  out += s.yB1 > 0.5 ? ",F)" : ",I)";
  return out;
}

/// A segment of fixed points parallel to the x1 axis, at fixed user states.
struct FixedLine {
  double yG1 = 0.0;
  double yB1 = 0.0;
  std::string label;

  double distance_to(const PopulationState& s) const noexcept {
    return std::hypot(s.yG1 - yG1, s.yB1 - yB1);
  }
};

/// Lines of fixed points of the built-in scenarios: (x1, A, F) when Medium
/// detects faking, (x1, A, I) under recourse.
inline std::vector<FixedLine> fixed_lines(const Scenario& scenario) {
  switch (scenario.kind) {
    case ScenarioKind::ManipulationProof: return {{0.0, 1.0, "(x1,A,F)"}};
    case ScenarioKind::Recourse: return {{0.0, 0.0, "(x1,A,I)"}};
    default: return {};
  }
}

/// Interior centre of the recourse cycles, when it lies inside the cube.
inline std::optional<PopulationState> recourse_center(const GameParameters& p) {
  const double x = (p.b + p.c_F - p.c_I) / p.b;
  if (p.p_G >= 1.0) return std::nullopt;
  const double z = p.rho * p.p_G / (p.lambda * (1.0 - p.p_G));
  if (!(x > 0.0 && x < 1.0 && z > 0.0 && z < 1.0)) return std::nullopt;
  return PopulationState{x, 1.0, z};
}

namespace detail {

inline std::optional<Vec3> solve3(const Mat3& a, const Vec3& rhs) noexcept {
  const double det = determinant(a);
  if (!(std::abs(det) > 1e-14 * std::max(1.0, std::pow(frobenius_norm(a), 3)))) return std::nullopt;
  Vec3 out{};
  for (std::size_t c = 0; c < 3; ++c) {
    Mat3 m = a;
    for (std::size_t r = 0; r < 3; ++r) m[r][c] = rhs[r];
    out[c] = determinant(m) / det;
  }
  return out;
}

/// Newton iteration on rhs = 0; returns the root if it converges inside the
/// closed cube.
inline std::optional<PopulationState> newton_fixed_point(const ReplicatorField& field, Vec3 y) {
  for (int it = 0; it < 60; ++it) {
    const Vec3 f = field(y);
    if (norm(f) < 1e-15) break;
    const auto step = solve3(jacobian_fd(PopulationState::from_vec(y), field), f);
    if (!step) return std::nullopt;
    for (std::size_t i = 0; i < 3; ++i) y[i] -= (*step)[i];
    if (!std::isfinite(y[0] + y[1] + y[2])) return std::nullopt;
    if (norm(*step) < 1e-15) break;
  }
  for (auto& c : y) {
    if (c < -1e-9 || c > 1.0 + 1e-9) return std::nullopt;
    c = std::clamp(c, 0.0, 1.0);
  }
  if (!(norm(field(y)) < 1e-12)) return std::nullopt;
  return PopulationState::from_vec(y);
}

}  // namespace detail

/// Spectrum from the closed-form Jacobian for built-ins, finite differences
/// otherwise.
inline Spectrum spectrum_at(const PopulationState& s, const ReplicatorField& field) {
  const Mat3 J = field.scenario().is_builtin()
                     ? jacobian_analytic(s, field.scenario(), field.params())
                     : jacobian_fd(s, field);
  return eigenvalues_3x3(J);
}

inline FixedPointReport make_report(const PopulationState& s, FixedPointKind kind,
                                    std::string label, const ReplicatorField& field) {
  FixedPointReport rep;
  rep.location = s;
  rep.kind = kind;
  rep.eigenvalues = spectrum_at(s, field);
  rep.classification = classify(rep.eigenvalues);
  rep.label = std::move(label);
  rep.rhs_norm = norm(field(s));
  return rep;
}

/// Corners, sampled fixed lines, the recourse centre, and any further fixed
/// points found by Newton refinement from a 9x9x9 interior grid.
inline std::vector<FixedPointReport> enumerate_fixed_points(const Scenario& scenario,
                                                            const GameParameters& params) {
  const ReplicatorField field(scenario, params);
  std::vector<FixedPointReport> out;

  for (int c = 0; c < 8; ++c) {
    const PopulationState s{double((c >> 2) & 1), double((c >> 1) & 1), double(c & 1)};
    out.push_back(make_report(s, FixedPointKind::Corner, corner_label(s), field));
  }

  const auto lines = fixed_lines(scenario);
  for (const auto& line : lines) {
    for (int k = 0; k <= 10; ++k) {
      const PopulationState s{k / 10.0, line.yG1, line.yB1};
      out.push_back(make_report(s, FixedPointKind::LineMember, line.label, field));
    }
  }

  std::optional<PopulationState> center;
  if (scenario.kind == ScenarioKind::Recourse) {
    center = recourse_center(params);
    if (center) out.push_back(make_report(*center, FixedPointKind::Interior, "center", field));
  }

  std::vector<PopulationState> found;
  auto is_known = [&](const PopulationState& s) {
    for (int c = 0; c < 8; ++c) {
      const PopulationState corner{double((c >> 2) & 1), double((c >> 1) & 1), double(c & 1)};
      if (distance(s, corner) < 1e-6) return true;
    }
    for (const auto& line : lines)
      if (line.distance_to(s) < 1e-6) return true;
    if (center && distance(s, *center) < 1e-6) return true;
    for (const auto& f : found)
      if (distance(s, f) < 1e-6) return true;
    return false;
  };
  for (int i = 1; i <= 9; ++i)
    for (int j = 1; j <= 9; ++j)
      for (int k = 1; k <= 9; ++k) {
        const auto root = detail::newton_fixed_point(field, {i / 10.0, j / 10.0, k / 10.0});
        if (root && !is_known(*root)) found.push_back(*root);
      }
  std::sort(found.begin(), found.end(), [](const PopulationState& a, const PopulationState& b) {
    return a.as_vec() < b.as_vec();
  });
  for (const auto& s : found) out.push_back(make_report(s, FixedPointKind::Nontrivial, "", field));
  return out;
}

}  // namespace coevo
