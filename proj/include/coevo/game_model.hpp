#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "coevo/errors.hpp"

namespace coevo {

// Strategies of the reduced game used by the dynamics. The integer value is
// the row/column index into the payoff matrices.
enum class InstitutionStrategy { Medium = 0, High = 1 };
enum class UserType { Good = 0, Bad = 1 };
enum class GoodStrategy { NotAdapt = 0, Adapt = 1 };
enum class BadStrategy { Fake = 0, Improve = 1 };

// Strategy sets of the extended game (Low institutions, three user actions).
enum class ExtendedInstitutionStrategy { Low = 0, Medium = 1, High = 2 };
enum class ExtendedUserStrategy { NotAdapt = 0, Fake = 1, Improve = 2 };

inline constexpr std::size_t kReducedInstitutionStrategies = 2;
inline constexpr std::size_t kReducedUserStrategies = 2;
inline constexpr std::size_t kExtendedInstitutionStrategies = 3;
inline constexpr std::size_t kExtendedUserStrategies = 3;

enum class ClassificationOutcome { TP, FP, TN, FN };

/// Positive classifications grant the service; acceptance is never stored
/// separately from the outcome.
constexpr bool is_accepted(ClassificationOutcome o) noexcept {
  return o == ClassificationOutcome::TP || o == ClassificationOutcome::FP;
}

inline std::string_view to_string(ClassificationOutcome o) noexcept {
  switch (o) {
    case ClassificationOutcome::TP: return "TP";
    case ClassificationOutcome::FP: return "FP";
    case ClassificationOutcome::TN: return "TN";
    case ClassificationOutcome::FN: return "FN";
  }
  return "?";
}

inline std::optional<ClassificationOutcome> parse_outcome(std::string_view s) noexcept {
  if (s == "TP") return ClassificationOutcome::TP;
  if (s == "FP") return ClassificationOutcome::FP;
  if (s == "TN") return ClassificationOutcome::TN;
  if (s == "FN") return ClassificationOutcome::FN;
  return std::nullopt;
}

/// Payoff and population constants of the game plus the institutions'
/// relative evolutionary rate.
struct GameParameters {
  double rho = 10.0;     // institution gain per true positive
  double lambda = 50.0;  // institution loss per false positive
  double b = 50.0;       // user benefit when accepted
  double c_I = 5.0;      // cost of adapting / improving
  double c_F = 1.0;      // cost of faking
  double p_G = 0.5;      // proportion of Good users
  double r = 1.0;        // institution rate relative to users

  double p_B() const noexcept { return 1.0 - p_G; }

  /// Throws InvalidParameters naming the first violated invariant.
  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(std::isfinite(v) && v > 0.0))
        throw InvalidParameters(std::string("invariant violated: ") + name + " > 0");
    };
    positive(rho, "rho");
    positive(lambda, "lambda");
    positive(b, "b");
    positive(c_I, "c_I");
    positive(c_F, "c_F");
    positive(r, "r");
    if (!(c_F < c_I)) throw InvalidParameters("invariant violated: c_F < c_I");
    if (!(c_I < b)) throw InvalidParameters("invariant violated: c_I < b");
    if (!(std::isfinite(p_G) && p_G >= 0.0 && p_G <= 1.0))
      throw InvalidParameters("invariant violated: 0 <= p_G <= 1");
  }

  friend bool operator==(const GameParameters&, const GameParameters&) = default;
};

/// Institution payoff of a classification outcome.
inline double institution_payoff(ClassificationOutcome o, const GameParameters& p) noexcept {
  switch (o) {
    case ClassificationOutcome::TP: return p.rho;
    case ClassificationOutcome::FP: return -p.lambda;
    case ClassificationOutcome::TN:
    case ClassificationOutcome::FN: return 0.0;
  }
  return 0.0;
}

/// Action cost for strategy index `strategy` of a user of type `type` in the
/// reduced game: NotAdapt is free, Adapt/Improve cost c_I, Fake costs c_F.
inline double user_cost(UserType type, int strategy, const GameParameters& p) noexcept {
  if (type == UserType::Good) return strategy == 0 ? 0.0 : p.c_I;
  return strategy == 0 ? p.c_F : p.c_I;
}

/// Outcome of every (institution strategy, user type, user strategy) triple
/// of the reduced game. Eight entries, always total.
class OutcomeTable {
 public:
  using Outcome = ClassificationOutcome;

  constexpr OutcomeTable() = default;

  /// Row order is (Medium, High); user columns are (NotAdapt, Adapt) for Good
  /// and (Fake, Improve) for Bad.
  constexpr OutcomeTable(std::array<Outcome, 2> medium_good, std::array<Outcome, 2> medium_bad,
                         std::array<Outcome, 2> high_good, std::array<Outcome, 2> high_bad) {
    for (int j = 0; j < 2; ++j) {
      set(InstitutionStrategy::Medium, UserType::Good, j, medium_good[j]);
      set(InstitutionStrategy::Medium, UserType::Bad, j, medium_bad[j]);
      set(InstitutionStrategy::High, UserType::Good, j, high_good[j]);
      set(InstitutionStrategy::High, UserType::Bad, j, high_bad[j]);
    }
  }

  constexpr Outcome at(InstitutionStrategy i, UserType u, int strategy) const {
    return entries_[index(i, u, strategy)];
  }
  constexpr Outcome at(InstitutionStrategy i, GoodStrategy s) const {
    return at(i, UserType::Good, static_cast<int>(s));
  }
  constexpr Outcome at(InstitutionStrategy i, BadStrategy s) const {
    return at(i, UserType::Bad, static_cast<int>(s));
  }

  constexpr void set(InstitutionStrategy i, UserType u, int strategy, Outcome o) {
    entries_[index(i, u, strategy)] = o;
  }

  friend constexpr bool operator==(const OutcomeTable&, const OutcomeTable&) = default;

 private:
  static constexpr std::size_t index(InstitutionStrategy i, UserType u, int strategy) {
    if (strategy < 0 || strategy > 1) throw InvalidArgument("user strategy index out of range");
    return static_cast<std::size_t>(i) * 4 + static_cast<std::size_t>(u) * 2 +
           static_cast<std::size_t>(strategy);
  }

  std::array<Outcome, 8> entries_{};
};

/// Outcome table of the extended game with Low institutions and the full
/// {NotAdapt, Fake, Improve} action set for both user types.
class ExtendedOutcomeTable {
 public:
  using Outcome = ClassificationOutcome;
  using Row = std::array<Outcome, kExtendedUserStrategies>;

  constexpr ExtendedOutcomeTable(std::array<Row, 3> good, std::array<Row, 3> bad)
      : good_(good), bad_(bad) {}

  constexpr Outcome at(ExtendedInstitutionStrategy i, UserType u, ExtendedUserStrategy s) const {
    const auto& rows = (u == UserType::Good) ? good_ : bad_;
    return rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
  }

 private:
  std::array<Row, 3> good_;
  std::array<Row, 3> bad_;
};

enum class ScenarioKind { Baseline, ManipulationProof, Recourse, Custom };

inline std::string_view to_string(ScenarioKind k) noexcept {
  switch (k) {
    case ScenarioKind::Baseline: return "baseline";
    case ScenarioKind::ManipulationProof: return "manipulation_proof";
    case ScenarioKind::Recourse: return "recourse";
    case ScenarioKind::Custom: return "custom";
  }
  return "?";
}

inline std::optional<ScenarioKind> parse_scenario_kind(std::string_view s) noexcept {
  if (s == "baseline") return ScenarioKind::Baseline;
  if (s == "manipulation_proof") return ScenarioKind::ManipulationProof;
  if (s == "recourse") return ScenarioKind::Recourse;
  if (s == "custom") return ScenarioKind::Custom;
  return std::nullopt;
}

namespace tables {

using enum ClassificationOutcome;

// Imperfect classifier: Medium cannot detect faking, High rejects
// non-adapting Good users.
inline constexpr OutcomeTable kBaseline{{TP, TP}, {FP, TP}, {FN, TP}, {TN, FN}};
// Medium detects faking.
inline constexpr OutcomeTable kManipulationProof{{TP, TP}, {TN, TP}, {FN, TP}, {TN, FN}};
// High gives actionable recourse, so an improving Bad user is accepted.
inline constexpr OutcomeTable kRecourse{{TP, TP}, {FP, TP}, {FN, TP}, {TN, TP}};

// Extended tables, rows (Low, Medium, High), columns (NotAdapt, Fake, Improve).
inline constexpr ExtendedOutcomeTable kExtendedBaseline{
    {{{TP, TP, TP}, {TP, TP, TP}, {FN, TP, TP}}},
    {{{FP, FP, TP}, {TN, FP, TP}, {TN, TN, FN}}}};
inline constexpr ExtendedOutcomeTable kExtendedManipulationProof{
    {{{TP, TP, TP}, {TP, TP, TP}, {FN, TP, TP}}},
    {{{FP, FP, TP}, {TN, TN, TP}, {TN, TN, FN}}}};
inline constexpr ExtendedOutcomeTable kExtendedRecourse{
    {{{TP, TP, TP}, {TP, TP, TP}, {FN, TP, TP}}},
    {{{FP, FP, TP}, {TN, FP, TP}, {TN, TN, TP}}}};

}  // namespace tables

/// A named outcome table. The three built-in scenarios are constants; custom
/// scenarios carry any user-supplied table.
struct Scenario {
  ScenarioKind kind = ScenarioKind::Baseline;
  OutcomeTable table = tables::kBaseline;

  static constexpr Scenario baseline() { return {ScenarioKind::Baseline, tables::kBaseline}; }
  static constexpr Scenario manipulation_proof() {
    return {ScenarioKind::ManipulationProof, tables::kManipulationProof};
  }
  static constexpr Scenario recourse() { return {ScenarioKind::Recourse, tables::kRecourse}; }
  static constexpr Scenario custom(const OutcomeTable& t) { return {ScenarioKind::Custom, t}; }

  static Scenario builtin(ScenarioKind k) {
    switch (k) {
      case ScenarioKind::Baseline: return baseline();
      case ScenarioKind::ManipulationProof: return manipulation_proof();
      case ScenarioKind::Recourse: return recourse();
      case ScenarioKind::Custom: break;
    }
    throw UnsupportedScenario("custom scenarios need an explicit outcome table");
  }

  bool is_builtin() const noexcept { return kind != ScenarioKind::Custom; }

  std::string_view name() const noexcept { return to_string(kind); }

  friend constexpr bool operator==(const Scenario&, const Scenario&) = default;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// The four payoff matrices of the reduced game, indexed
/// [institution strategy][user strategy].
struct PayoffMatrices {
  Matrix2 I_G{};  // institution vs Good user
  Matrix2 I_B{};  // institution vs Bad user
  Matrix2 U_G{};  // Good user payoff
  Matrix2 U_B{};  // Bad user payoff

  friend bool operator==(const PayoffMatrices&, const PayoffMatrices&) = default;
};

inline PayoffMatrices build_payoffs(const Scenario& scenario, const GameParameters& params) {
  params.validate();
  PayoffMatrices m;
  for (int i = 0; i < 2; ++i) {
    const auto inst = static_cast<InstitutionStrategy>(i);
    for (int j = 0; j < 2; ++j) {
      const auto good = scenario.table.at(inst, UserType::Good, j);
      const auto bad = scenario.table.at(inst, UserType::Bad, j);
      m.I_G[i][j] = institution_payoff(good, params);
      m.I_B[i][j] = institution_payoff(bad, params);
      m.U_G[i][j] = (is_accepted(good) ? params.b : 0.0) - user_cost(UserType::Good, j, params);
      m.U_B[i][j] = (is_accepted(bad) ? params.b : 0.0) - user_cost(UserType::Bad, j, params);
    }
  }
  return m;
}

/// Institution payoffs of Low and Medium in the extended game, and whether Low
/// is redundant: identical to Medium against Good users and weakly dominated
/// (strictly for at least one action) against Bad users.
struct DominanceReport {
  ScenarioKind scenario = ScenarioKind::Baseline;
  std::array<double, kExtendedUserStrategies> low_vs_good{};
  std::array<double, kExtendedUserStrategies> medium_vs_good{};
  std::array<double, kExtendedUserStrategies> low_vs_bad{};
  std::array<double, kExtendedUserStrategies> medium_vs_bad{};
  bool equal_vs_good = false;
  bool dominated_vs_bad = false;

  bool passes() const noexcept { return equal_vs_good && dominated_vs_bad; }
};

inline const ExtendedOutcomeTable& extended_table(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Baseline: return tables::kExtendedBaseline;
    case ScenarioKind::ManipulationProof: return tables::kExtendedManipulationProof;
    case ScenarioKind::Recourse: return tables::kExtendedRecourse;
    case ScenarioKind::Custom: break;
  }
  throw UnsupportedScenario("no extended outcome table for custom scenarios");
}

inline DominanceReport check_low_dominance(const Scenario& scenario, const GameParameters& params) {
  params.validate();
  const auto& ext = extended_table(scenario.kind);
  DominanceReport rep;
  rep.scenario = scenario.kind;
  rep.equal_vs_good = true;
  bool weakly = true;
  bool strictly_once = false;
  for (std::size_t s = 0; s < kExtendedUserStrategies; ++s) {
    const auto us = static_cast<ExtendedUserStrategy>(s);
    using E = ExtendedInstitutionStrategy;
    rep.low_vs_good[s] = institution_payoff(ext.at(E::Low, UserType::Good, us), params);
    rep.medium_vs_good[s] = institution_payoff(ext.at(E::Medium, UserType::Good, us), params);
    rep.low_vs_bad[s] = institution_payoff(ext.at(E::Low, UserType::Bad, us), params);
    rep.medium_vs_bad[s] = institution_payoff(ext.at(E::Medium, UserType::Bad, us), params);
    rep.equal_vs_good = rep.equal_vs_good &&
                        ext.at(E::Low, UserType::Good, us) == ext.at(E::Medium, UserType::Good, us);
    weakly = weakly && rep.low_vs_bad[s] <= rep.medium_vs_bad[s];
    strictly_once = strictly_once || rep.low_vs_bad[s] < rep.medium_vs_bad[s];
  }
  rep.dominated_vs_bad = weakly && strictly_once;
  return rep;
}

}  // namespace coevo
