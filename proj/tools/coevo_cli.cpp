// coevo: command-line front end for the replicator engine.

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coevo/coevo.hpp"

using namespace coevo;

namespace {

enum Exit { kOk = 0, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> threads;
  std::optional<std::uint64_t> seed;

  std::optional<std::string> scenario;
  std::optional<double> rho, lambda, b, c_I, c_F, p_G, r;

  std::optional<double> x0, yg0, yb0, t_end, dt;
  std::optional<std::size_t> record_every, grid_n, n_random;
  bool metrics = false;
  std::string ratios = "0.2,0.4";
  std::string rates = "1,2,5";
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("bad number '") + item + "' in --" + what);
    }
  }
  if (out.empty()) throw InvalidArgument(std::string("--") + what + " is empty");
  return out;
}

unsigned parse_threads(const std::string& s) {
  if (s == "auto") return 0;
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size() && v > 0) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  throw InvalidArgument("--threads expects a positive integer or 'auto'");
}

// Config file first, then command-line flags on top.
RunConfig resolve(const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (f.scenario) {
    const auto k = parse_scenario_kind(*f.scenario);
    if (!k || *k == ScenarioKind::Custom)
      throw InvalidArgument("--scenario expects baseline, manipulation_proof or recourse");
    cfg.scenario = Scenario::builtin(*k);
  }
  auto set = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  set(cfg.params.rho, f.rho);
  set(cfg.params.lambda, f.lambda);
  set(cfg.params.b, f.b);
  set(cfg.params.c_I, f.c_I);
  set(cfg.params.c_F, f.c_F);
  set(cfg.params.p_G, f.p_G);
  set(cfg.params.r, f.r);
  set(cfg.initial.x1, f.x0);
  set(cfg.initial.yG1, f.yg0);
  set(cfg.initial.yB1, f.yb0);
  if (f.t_end) cfg.t_end = *f.t_end;
  set(cfg.dt, f.dt);
  set(cfg.record_every, f.record_every);
  set(cfg.grid_n, f.grid_n);
  set(cfg.n_random, f.n_random);
  set(cfg.seed, f.seed);
  set(cfg.out, f.out);
  set(cfg.format, f.format);
  if (f.threads) cfg.threads = parse_threads(*f.threads);
  cfg.validate();
  return cfg;
}

Format format_or(const RunConfig& cfg, Format fallback) {
  return cfg.format.empty() ? fallback : *parse_format(cfg.format);
}

BasinSettings basin_settings(const RunConfig& cfg) {
  BasinSettings b;
  b.n_per_axis = cfg.grid_n;
  b.t_end = cfg.t_end.value_or(200.0);
  b.dt = cfg.dt;
  b.tol_corner = cfg.tol_corner;
  b.threads = cfg.threads;
  return b;
}

std::string run_dominance(const RunConfig& cfg, Format fmt) {
  const auto rep = check_low_dominance(cfg.scenario, cfg.params);
  if (fmt == Format::Json) return dump(to_json(rep));
  std::string out = "scenario,equal_vs_good,dominated_vs_bad\n";
  out += std::string(to_string(rep.scenario)) + "," + (rep.equal_vs_good ? "true" : "false") + "," +
         (rep.dominated_vs_bad ? "true" : "false") + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replicator dynamics of institutions and strategic users"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("--config", f.config, "key = value configuration file");
  app.add_option("--out", f.out, "output path ('-' for stdout)");
  app.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", f.threads, "worker threads, or 'auto'");
  app.add_option("--seed", f.seed, "random seed for the cycle census");
  app.add_option("--scenario", f.scenario, "baseline, manipulation_proof or recourse");
  app.add_option("--rho", f.rho, "institution gain per true positive");
  app.add_option("--lambda", f.lambda, "institution loss per false positive");
  app.add_option("--b", f.b, "user benefit when accepted");
  app.add_option("--c-I", f.c_I, "cost of adapting or improving");
  app.add_option("--c-F", f.c_F, "cost of faking");
  app.add_option("--p-G", f.p_G, "proportion of Good users");
  app.add_option("--r", f.r, "institution rate relative to users");
  app.add_option("--dt", f.dt, "integration step");

  auto* simulate = app.add_subcommand("simulate", "integrate one trajectory");
  simulate->add_option("--x0", f.x0, "initial share of Medium institutions");
  simulate->add_option("--yg0", f.yg0, "initial share of Good users not adapting");
  simulate->add_option("--yb0", f.yb0, "initial share of Bad users faking");
  simulate->add_option("--t-end", f.t_end, "final time (default 200)");
  simulate->add_option("--record-every", f.record_every, "keep every n-th step");
  simulate->add_flag("--metrics", f.metrics, "append outcome frequencies and social cost");

  auto* stability = app.add_subcommand("stability", "fixed points and their spectra");

  auto* basins = app.add_subcommand("basins", "basin sizes over an initial-condition grid");
  basins->add_option("--grid-n", f.grid_n, "points per axis (default 20)");
  basins->add_option("--t-end", f.t_end, "horizon per point (default 200)");

  auto* sweep = app.add_subcommand("sweep", "basin sizes over rho/lambda and r");
  sweep->add_option("--ratios", f.ratios, "comma-separated rho/lambda values");
  sweep->add_option("--rates", f.rates, "comma-separated r values");
  sweep->add_option("--grid-n", f.grid_n, "points per axis (default 20)");
  sweep->add_option("--t-end", f.t_end, "horizon per point (default 200)");

  auto* cycles = app.add_subcommand("cycles", "census of cycling initial conditions");
  cycles->add_option("--n-random", f.n_random, "number of random starts (default 200)");
  cycles->add_option("--t-end", f.t_end, "horizon per start (default 50)");

  auto* dominance = app.add_subcommand("dominance", "check that Low is a redundant institution strategy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    const RunConfig cfg = resolve(f);
    std::string text;
    if (simulate->parsed()) {
      IntegrationSettings s{cfg.t_end.value_or(200.0), cfg.dt, cfg.record_every};
      auto traj = integrate(cfg.initial, ReplicatorField(cfg.scenario, cfg.params), s);
      const auto fmt = format_or(cfg, Format::Csv);
      text = f.metrics ? render(annotate_trajectory(std::move(traj)), fmt) : render(traj, fmt);
    } else if (stability->parsed()) {
      text = render(enumerate_fixed_points(cfg.scenario, cfg.params), format_or(cfg, Format::Json));
    } else if (basins->parsed()) {
      text = render(basin_sizes(cfg.scenario, cfg.params, basin_settings(cfg)), format_or(cfg, Format::Json));
    } else if (sweep->parsed()) {
      const auto ratios = parse_list(f.ratios, "ratios");
      const auto rates = parse_list(f.rates, "rates");
      text = render(sweep_basins(cfg.scenario, cfg.params, ratios, rates, basin_settings(cfg)),
                    format_or(cfg, Format::Csv));
    } else if (cycles->parsed()) {
      CensusSettings cs;
      cs.n_random = cfg.n_random;
      cs.seed = cfg.seed;
      cs.integration = {cfg.t_end.value_or(50.0), cfg.dt, 1};
      cs.detection.tol_corner = cfg.tol_corner;
      cs.threads = cfg.threads;
      text = render(cycle_census(cfg.scenario, cfg.params, cs), format_or(cfg, Format::Json));
    } else if (dominance->parsed()) {
      text = run_dominance(cfg, format_or(cfg, Format::Json));
    }
    write_output(cfg.out, text);
  } catch (const IoError& e) {
    std::fprintf(stderr, "coevo: %s\n", e.what());
    return kIoError;
  } catch (const StepInstability& e) {
    std::fprintf(stderr, "coevo: %s\n", e.what());
    return kNumericalError;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "coevo: config line %d, column %d: %s\n", e.line(), e.column(), e.what());
    return kConfigError;
  } catch (const Error& e) {
    std::fprintf(stderr, "coevo: %s\n", e.what());
    return kConfigError;
  }
  return kOk;
}
