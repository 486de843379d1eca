#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "coevo/errors.hpp"
#include "coevo/game_model.hpp"

namespace coevo {

using Vec3 = std::array<double, 3>;

/// Point of the state cube: fraction of Medium institutions, of Good users
/// playing NotAdapt and of Bad users playing Fake. Complements are derived.
struct PopulationState {
  double x1 = 0.5;
  double yG1 = 0.5;
  double yB1 = 0.5;

  double x2() const noexcept { return 1.0 - x1; }
  double yG2() const noexcept { return 1.0 - yG1; }
  double yB2() const noexcept { return 1.0 - yB1; }

  Vec3 as_vec() const noexcept { return {x1, yG1, yB1}; }
  static PopulationState from_vec(const Vec3& v) noexcept { return {v[0], v[1], v[2]}; }

  bool in_cube() const noexcept {
    auto ok = [](double v) { return v >= 0.0 && v <= 1.0; };
    return ok(x1) && ok(yG1) && ok(yB1);
  }

  void validate() const {
    if (!in_cube()) throw InvalidArgument("population state outside the unit cube");
  }

  friend bool operator==(const PopulationState&, const PopulationState&) = default;
};

inline double distance(const PopulationState& a, const PopulationState& b) noexcept {
  return std::hypot(a.x1 - b.x1, a.yG1 - b.yG1, a.yB1 - b.yB1);
}

inline double norm(const Vec3& v) noexcept { return std::hypot(v[0], v[1], v[2]); }

struct FitnessProfile {
  std::array<double, 2> f_I{};
  std::array<double, 2> f_G{};
  std::array<double, 2> f_B{};
  double fbar_I = 0.0;
  double fbar_G = 0.0;
  double fbar_B = 0.0;
};

namespace detail {
inline double dot_row(const Matrix2& m, int row, double w0, double w1) noexcept {
  return m[row][0] * w0 + m[row][1] * w1;
}
}  // namespace detail

inline FitnessProfile fitness(const PopulationState& s, const PayoffMatrices& m,
                              const GameParameters& p) noexcept {
  FitnessProfile f;
  for (int i = 0; i < 2; ++i) {
    f.f_I[i] = p.p_G * detail::dot_row(m.I_G, i, s.yG1, s.yG2()) +
               p.p_B() * detail::dot_row(m.I_B, i, s.yB1, s.yB2());
  }
  // User payoff row j is column j of the [institution][user] matrices.
  for (int j = 0; j < 2; ++j) {
    f.f_G[j] = m.U_G[0][j] * s.x1 + m.U_G[1][j] * s.x2();
    f.f_B[j] = m.U_B[0][j] * s.x1 + m.U_B[1][j] * s.x2();
  }
  f.fbar_I = f.f_I[0] * s.x1 + f.f_I[1] * s.x2();
  f.fbar_G = f.f_G[0] * s.yG1 + f.f_G[1] * s.yG2();
  f.fbar_B = f.f_B[0] * s.yB1 + f.f_B[1] * s.yB2();
  return f;
}

/// Replicator vector field of one scenario, with payoffs built once.
///
/// Each component is x(1-x) times the fitness gap between the first and
/// second strategy of its population; the institution component is scaled by
/// the rate r. The form is exact on the cube faces, so they stay invariant.
class ReplicatorField {
 public:
  ReplicatorField(const Scenario& scenario, const GameParameters& params)
      : scenario_(scenario), params_(params), payoffs_(build_payoffs(scenario, params)) {}

  Vec3 operator()(const Vec3& v) const noexcept {
    const PopulationState s = PopulationState::from_vec(v);
    const FitnessProfile f = fitness(s, payoffs_, params_);
    return {params_.r * s.x1 * s.x2() * (f.f_I[0] - f.f_I[1]),
            s.yG1 * s.yG2() * (f.f_G[0] - f.f_G[1]),
            s.yB1 * s.yB2() * (f.f_B[0] - f.f_B[1])};
  }

  Vec3 operator()(const PopulationState& s) const noexcept { return (*this)(s.as_vec()); }

  const Scenario& scenario() const noexcept { return scenario_; }
  const GameParameters& params() const noexcept { return params_; }
  const PayoffMatrices& payoffs() const noexcept { return payoffs_; }

 private:
  Scenario scenario_;
  GameParameters params_;
  PayoffMatrices payoffs_;
};

inline Vec3 replicator_rhs(const PopulationState& s, const Scenario& scenario,
                           const GameParameters& params) {
  return ReplicatorField(scenario, params)(s);
}

struct Trajectory {
  std::vector<double> times;
  std::vector<PopulationState> states;
  Scenario scenario;
  GameParameters params;

  std::size_t size() const noexcept { return states.size(); }
  bool empty() const noexcept { return states.empty(); }
  const PopulationState& back() const { return states.back(); }
  double t_end() const { return times.back(); }
};

struct IntegrationSettings {
  double t_end = 200.0;
  double dt = 0.01;
  std::size_t record_every = 1;
};

/// Largest excursion outside [0,1] that a step may clamp silently.
inline constexpr double kClampTolerance = 1e-12;

namespace detail {

// Also flushes subnormal values to zero: they only arise on the exponential
// approach to a face and make every later step orders of magnitude slower.
inline double clamp_coordinate(double v, double t) {
  if (v < -kClampTolerance || v > 1.0 + kClampTolerance || !std::isfinite(v)) {
    throw StepInstability("state left the unit cube at t=" + std::to_string(t) +
                          " (value " + std::to_string(v) + "); reduce the step size");
  }
  if (v < std::numeric_limits<double>::min()) return 0.0;
  return v > 1.0 ? 1.0 : v;
}

inline Vec3 rk4_step(const ReplicatorField& f, const Vec3& y, double h) noexcept {
  auto axpy = [](const Vec3& a, double s, const Vec3& b) {
    return Vec3{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
  };
  const Vec3 k1 = f(y);
  const Vec3 k2 = f(axpy(y, 0.5 * h, k1));
  const Vec3 k3 = f(axpy(y, 0.5 * h, k2));
  const Vec3 k4 = f(axpy(y, h, k3));
  Vec3 out;
  for (std::size_t i = 0; i < 3; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace detail

/// Steps needed to reach t_end with step dt; the last step lands on t_end.
inline std::size_t step_count(double t_end, double dt) {
  const double n = std::ceil(t_end / dt - 1e-9);
  return static_cast<std::size_t>(n < 1.0 ? 1.0 : n);
}

/// Integrates with classical fixed-step RK4 on `field`, starting at time
/// `t0`. Records the start, every `record_every`-th step, and the final state.
inline Trajectory integrate(const PopulationState& state0, const ReplicatorField& field,
                            const IntegrationSettings& cfg, double t0 = 0.0) {
  if (!(cfg.t_end > 0.0) || !(cfg.dt > 0.0) || cfg.record_every < 1)
    throw InvalidArgument("integrate requires t_end > 0, dt > 0 and record_every >= 1");
  state0.validate();

  const std::size_t n = step_count(cfg.t_end, cfg.dt);
  const double h = cfg.t_end / static_cast<double>(n);

  Trajectory traj;
  traj.scenario = field.scenario();
  traj.params = field.params();
  traj.times.reserve(n / cfg.record_every + 2);
  traj.states.reserve(n / cfg.record_every + 2);
  traj.times.push_back(t0);
  traj.states.push_back(state0);

  Vec3 y = state0.as_vec();
  bool stationary = false;
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = t0 + h * static_cast<double>(k);
    if (!stationary) {
      const Vec3 prev = y;
      y = detail::rk4_step(field, y, h);
      for (auto& c : y) c = detail::clamp_coordinate(c, t);
      // A step that reproduces its input bit for bit will keep doing so.
      stationary = (y == prev);
    }
    if (k % cfg.record_every == 0 || k == n) {
      traj.times.push_back(t);
      traj.states.push_back(PopulationState::from_vec(y));
    }
  }
  return traj;
}

inline Trajectory integrate(const PopulationState& state0, const Scenario& scenario,
                            const GameParameters& params, const IntegrationSettings& cfg) {
  return integrate(state0, ReplicatorField(scenario, params), cfg);
}

inline Trajectory integrate(const PopulationState& state0, const Scenario& scenario,
                            const GameParameters& params, double t_end, double dt,
                            std::size_t record_every) {
  return integrate(state0, scenario, params, IntegrationSettings{t_end, dt, record_every});
}

}  // namespace coevo
