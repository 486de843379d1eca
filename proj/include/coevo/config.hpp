#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "coevo/dynamics.hpp"
#include "coevo/errors.hpp"
#include "coevo/game_model.hpp"

namespace coevo {

/// Everything a CLI run needs. Keys absent from the config file keep these
/// defaults; `t_end` stays empty so each subcommand can apply its own horizon.
struct RunConfig {
  Scenario scenario = Scenario::baseline();
  GameParameters params;

  std::optional<double> t_end;
  double dt = 0.01;
  std::size_t record_every = 1;
  PopulationState initial{0.5, 0.5, 0.5};

  std::size_t grid_n = 20;
  std::size_t n_random = 200;
  std::uint64_t seed = 1;
  double tol_corner = 1e-3;
  unsigned threads = 0;

  std::string out;
  std::string format;

  void validate() const {
    params.validate();
    if (t_end && !(*t_end > 0.0)) throw InvalidParameters("invariant violated: t_end > 0");
    if (!(dt > 0.0)) throw InvalidParameters("invariant violated: dt > 0");
    if (record_every < 1) throw InvalidParameters("invariant violated: record_every >= 1");
    if (grid_n < 2) throw InvalidParameters("invariant violated: grid_n >= 2");
    if (!(tol_corner > 0.0)) throw InvalidParameters("invariant violated: tol_corner > 0");
    if (!initial.in_cube())
      throw InvalidParameters("invariant violated: initial state inside the unit cube");
    if (!format.empty() && format != "csv" && format != "json")
      throw InvalidParameters("invariant violated: format is csv or json");
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline const char* strategy_key(UserType u, int j) noexcept {
  if (u == UserType::Good) return j == 0 ? "not_adapt" : "adapt";
  return j == 0 ? "fake" : "improve";
}

inline std::string outcome_key(InstitutionStrategy i, UserType u, int j) {
  std::string k = "outcome.";
  k += (i == InstitutionStrategy::Medium) ? "M." : "H.";
  k += (u == UserType::Good) ? "good." : "bad.";
  k += strategy_key(u, j);
  return k;
}

struct OutcomeSlot {
  InstitutionStrategy inst;
  UserType type;
  int strategy;
};

inline std::optional<OutcomeSlot> parse_outcome_key(std::string_view key) {
  for (int i = 0; i < 2; ++i)
    for (int u = 0; u < 2; ++u)
      for (int j = 0; j < 2; ++j) {
        const OutcomeSlot slot{static_cast<InstitutionStrategy>(i), static_cast<UserType>(u), j};
        if (key == outcome_key(slot.inst, slot.type, slot.strategy)) return slot;
      }
  return std::nullopt;
}

}  // namespace detail

/// Parses `key = value` config text. Blank lines and `#` comments are
/// ignored. Every key may appear at most once; unknown keys are rejected.
inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  std::map<std::string, std::pair<ClassificationOutcome, int>> outcomes;
  std::optional<ScenarioKind> kind;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (detail::trim(line).empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      const auto col = line.find_first_not_of(" \t") + 1;
      throw ParseError("expected 'key = value'", line_no, static_cast<int>(col));
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view raw = line.substr(eq + 1);
    const std::string_view value = detail::trim(raw);
    const auto lead = raw.find_first_not_of(" \t");
    const int value_col = static_cast<int>(eq + 2 + (lead == std::string_view::npos ? 0 : lead));
    if (key.empty()) throw ParseError("missing key", line_no, 1);
    if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no, value_col);
    if (seen.count(key)) throw ParseError("duplicate key '" + key + "'", line_no, 1);
    seen[key] = line_no;

    auto number = [&]() {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ParseError("expected a number for '" + key + "'", line_no, value_col);
      return v;
    };
    auto integer = [&]() -> std::uint64_t {
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ParseError("expected a non-negative integer for '" + key + "'", line_no, value_col);
      return v;
    };

    if (key == "scenario") {
      kind = parse_scenario_kind(value);
      if (!kind) throw ParseError("unknown scenario '" + std::string(value) + "'", line_no, value_col);
    } else if (key == "rho") cfg.params.rho = number();
    else if (key == "lambda") cfg.params.lambda = number();
    else if (key == "b") cfg.params.b = number();
    else if (key == "c_I") cfg.params.c_I = number();
    else if (key == "c_F") cfg.params.c_F = number();
    else if (key == "p_G") cfg.params.p_G = number();
    else if (key == "r") cfg.params.r = number();
    else if (key == "t_end") cfg.t_end = number();
    else if (key == "dt") cfg.dt = number();
    else if (key == "record_every") cfg.record_every = integer();
    else if (key == "x0") cfg.initial.x1 = number();
    else if (key == "yg0") cfg.initial.yG1 = number();
    else if (key == "yb0") cfg.initial.yB1 = number();
    else if (key == "grid_n") cfg.grid_n = integer();
    else if (key == "n_random") cfg.n_random = integer();
    else if (key == "seed") cfg.seed = integer();
    else if (key == "tol_corner") cfg.tol_corner = number();
    else if (key == "threads") cfg.threads = static_cast<unsigned>(integer());
    else if (key == "out") cfg.out = std::string(value);
    else if (key == "format") cfg.format = std::string(value);
    else if (key.rfind("outcome.", 0) == 0) {
      if (!detail::parse_outcome_key(key)) throw UnknownKey(key);
      const auto o = parse_outcome(value);
      if (!o) throw ParseError("expected TP, FP, TN or FN for '" + key + "'", line_no, value_col);
      outcomes[key] = {*o, line_no};
    } else {
      throw UnknownKey(key);
    }
  }

  const ScenarioKind k = kind.value_or(ScenarioKind::Baseline);
  if (k == ScenarioKind::Custom) {
    OutcomeTable table;
    for (int i = 0; i < 2; ++i)
      for (int u = 0; u < 2; ++u)
        for (int j = 0; j < 2; ++j) {
          const auto inst = static_cast<InstitutionStrategy>(i);
          const auto type = static_cast<UserType>(u);
          const auto key = detail::outcome_key(inst, type, j);
          const auto it = outcomes.find(key);
          if (it == outcomes.end())
            throw InvalidParameters("custom scenario is missing '" + key + "'");
          table.set(inst, type, j, it->second.first);
        }
    cfg.scenario = Scenario::custom(table);
  } else {
    if (!outcomes.empty())
      throw InvalidParameters("outcome entries are only allowed with scenario = custom");
    cfg.scenario = Scenario::builtin(k);
  }
  cfg.validate();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Writes a config text that parse_config maps back to an equal RunConfig.
inline std::string emit_config(const RunConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "scenario = " << cfg.scenario.name() << '\n';
  if (cfg.scenario.kind == ScenarioKind::Custom) {
    for (int i = 0; i < 2; ++i)
      for (int u = 0; u < 2; ++u)
        for (int j = 0; j < 2; ++j) {
          const auto inst = static_cast<InstitutionStrategy>(i);
          const auto type = static_cast<UserType>(u);
          os << detail::outcome_key(inst, type, j) << " = "
             << to_string(cfg.scenario.table.at(inst, type, j)) << '\n';
        }
  }
  const auto& p = cfg.params;
  os << "rho = " << p.rho << "\nlambda = " << p.lambda << "\nb = " << p.b << "\nc_I = " << p.c_I
     << "\nc_F = " << p.c_F << "\np_G = " << p.p_G << "\nr = " << p.r << '\n';
  if (cfg.t_end) os << "t_end = " << *cfg.t_end << '\n';
  os << "dt = " << cfg.dt << "\nrecord_every = " << cfg.record_every << "\nx0 = " << cfg.initial.x1
     << "\nyg0 = " << cfg.initial.yG1 << "\nyb0 = " << cfg.initial.yB1 << "\ngrid_n = " << cfg.grid_n
     << "\nn_random = " << cfg.n_random << "\nseed = " << cfg.seed
     << "\ntol_corner = " << cfg.tol_corner << "\nthreads = " << cfg.threads << '\n';
  if (!cfg.out.empty()) os << "out = " << cfg.out << '\n';
  if (!cfg.format.empty()) os << "format = " << cfg.format << '\n';
  return os.str();
}

}  // namespace coevo
