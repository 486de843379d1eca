#pragma once

#include <vector>

#include "coevo/dynamics.hpp"
#include "coevo/game_model.hpp"

namespace coevo {

/// Population-level frequencies of classification outcomes: each user meets
/// the institution mix once.
struct OutcomeFrequencies {
  double tp = 0.0;
  double tn = 0.0;
  double fp = 0.0;
  double fn = 0.0;

  double total() const noexcept { return tp + tn + fp + fn; }
};

struct SocialCost {
  double value = 0.0;
};

inline OutcomeFrequencies outcome_frequencies(const PopulationState& s, const Scenario& scenario,
                                              const GameParameters& p) {
  OutcomeFrequencies f;
  const double inst[2] = {s.x1, s.x2()};
  const double good[2] = {s.yG1, s.yG2()};
  const double bad[2] = {s.yB1, s.yB2()};
  for (int i = 0; i < 2; ++i) {
    for (int u = 0; u < 2; ++u) {
      const double share = (u == 0) ? p.p_G : p.p_B();
      const double* mix = (u == 0) ? good : bad;
      for (int j = 0; j < 2; ++j) {
        const double w = inst[i] * share * mix[j];
        switch (scenario.table.at(static_cast<InstitutionStrategy>(i), static_cast<UserType>(u), j)) {
          case ClassificationOutcome::TP: f.tp += w; break;
          case ClassificationOutcome::TN: f.tn += w; break;
          case ClassificationOutcome::FP: f.fp += w; break;
          case ClassificationOutcome::FN: f.fn += w; break;
        }
      }
    }
  }
  return f;
}

/// Fraction of Good users paying to adapt.
inline SocialCost social_cost(const PopulationState& s) noexcept { return {1.0 - s.yG1}; }

struct AnnotatedTrajectory {
  Trajectory trajectory;
  std::vector<OutcomeFrequencies> frequencies;
  std::vector<SocialCost> social_costs;
};

inline AnnotatedTrajectory annotate_trajectory(Trajectory traj) {
  AnnotatedTrajectory out;
  out.frequencies.reserve(traj.size());
  out.social_costs.reserve(traj.size());
  for (const auto& s : traj.states) {
    out.frequencies.push_back(outcome_frequencies(s, traj.scenario, traj.params));
    out.social_costs.push_back(social_cost(s));
  }
  out.trajectory = std::move(traj);
  return out;
}

}  // namespace coevo
