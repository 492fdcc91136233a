// wearnet: Monte Carlo experiments for enclosed mmWave wearable networks.
//
// Every subcommand resolves a full configuration (defaults for its
// experiment, then --config, then flags), writes one CSV per result table and
// a manifest.json into --out, and prints a short summary. Re-running with
// --config <out>/manifest.json reproduces the CSVs byte for byte.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <vector>
#include <string>

#include "wearnet/config.hpp"
#include "wearnet/harness.hpp"

namespace fs = std::filesystem;
using namespace wearnet;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::string> mode;
  std::string out = "out";
  std::optional<unsigned> workers;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<ExperimentId> accepts;  ///< first entry is the default
};

RunConfig resolve(const Options& o, const Command& cmd) {
  const ExperimentId fallback = cmd.accepts.front();
  RunConfig run = o.config.empty() ? parse_config(nlohmann::json::object(), fallback) : load_config(o.config, fallback);
  if (std::find(cmd.accepts.begin(), cmd.accepts.end(), run.experiment.id) == cmd.accepts.end())
    throw ConfigError("experiment.id", "\"" + std::string(to_string(run.experiment.id)) + "\" cannot run under " +
                                           cmd.name);
  if (o.seed) run.experiment.seed = *o.seed;
  if (o.reps) {
    if (*o.reps < 1) throw ConfigError("--reps", "must be >= 1");
    run.experiment.replications = *o.reps;
  }
  if (o.mode) {
    try {
      run.experiment.mode = parse_mode_selection(*o.mode);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("--mode", e.what());
    }
  }
  run.experiment.workers = resolve_workers(o.workers);
  return run;
}

template <typename Writer>
fs::path write_csv(const fs::path& dir, const std::string& name, Writer&& writer) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writer(out);
  if (!out) throw std::runtime_error("failed writing " + path.string());
  return path;
}

std::string fmt(double x, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

int run_command(const Command& cmd, const Options& o) {
  const RunConfig run = resolve(o, cmd);
  const fs::path dir = o.out;
  const std::string id(to_string(run.experiment.id));
  const CsvContext ctx{id, config_hash(run), run.experiment.seed};
  const auto& cfg = run.scenario;
  const auto& spec = run.experiment;

  switch (spec.id) {
    case ExperimentId::kFig5: {
      const auto v = run_blockage_validation(cfg, spec);
      const auto path = write_csv(dir, id + ".csv", [&](std::ostream& os) { write_blockage_csv(os, ctx, v); });
      for (const auto& r : v.rows)
        std::cout << "K=" << r.interferers << " r_w=" << r.wearable_offset << ' ' << r.path_class
                  << " exact=" << fmt(r.p_exact) << " stochastic=" << fmt(r.p_stochastic) << '\n';
      std::cout << "clamped probabilities: " << v.clamps << "\nwrote " << path.string() << '\n';
      break;
    }
    case ExperimentId::kFig6: {
      const auto series = run_sinr_cdf(cfg, spec);
      const auto path = write_csv(dir, id + ".csv", [&](std::ostream& os) { write_sinr_csv(os, ctx, series); });
      for (const auto& s : series)
        std::cout << "K=" << s.interferers << ' ' << to_string(s.mode) << " beta0=" << s.onbody_beta << ' '
                  << to_string(s.reflectivity) << " median SINR=" << fmt(plot_db(median(s.sinr)), 2) << " dB\n";
      std::cout << "wrote " << path.string() << '\n';
      break;
    }
    case ExperimentId::kFig8a:
    case ExperimentId::kFig8b: {
      const auto rows = run_mean_se_sweeps(cfg, spec);
      const auto path = write_csv(dir, id + ".csv", [&](std::ostream& os) { write_mean_se_csv(os, ctx, rows); });
      for (const auto& r : rows)
        std::cout << to_string(r.placement) << " r_w=" << r.wearable_offset << " K=" << r.interferers
                  << " B=" << r.bandwidth << " beta0=" << r.onbody_beta << ' ' << to_string(r.reflectivity) << ' '
                  << to_string(r.mode) << " mean SE=" << fmt(r.se.mean) << " +- " << fmt(r.se.half_width) << '\n';
      std::cout << "wrote " << path.string() << '\n';
      break;
    }
    case ExperimentId::kFig9: {
      const auto series = run_antenna_cdf(cfg, spec);
      const auto path = write_csv(dir, id + ".csv", [&](std::ostream& os) { write_antenna_csv(os, ctx, series); });
      for (const auto& s : series)
        std::cout << "K=" << s.interferers << " N=" << s.array_elements << ' ' << to_string(s.reflectivity) << ' '
                  << to_string(s.mode) << " tx_gains=" << (s.stochastic_gains ? "stochastic" : "exact")
                  << " median SE=" << fmt(median(s.se), 3) << '\n';
      std::cout << "wrote " << path.string() << '\n';
      break;
    }
    case ExperimentId::kFig10: {
      const auto sweep = run_shadow_crossover(cfg, spec);
      const auto path = write_csv(dir, id + ".csv", [&](std::ostream& os) { write_shadow_csv(os, ctx, sweep); });
      const auto cross = write_csv(dir, id + "_crossings.csv",
                                   [&](std::ostream& os) { write_shadow_crossings_csv(os, ctx, sweep); });
      for (const auto& c : sweep.crossings)
        std::cout << "K=" << c.interferers << " N=" << c.array_elements << ' ' << to_string(c.reflectivity) << ' '
                  << to_string(c.mode) << " crossing=" << (std::isnan(c.crossing_db) ? "none" : fmt(c.crossing_db, 2))
                  << " dB\n";
      std::cout << "wrote " << path.string() << " and " << cross.string() << '\n';
      break;
    }
    case ExperimentId::kCustom: {
      const auto result = run_custom(cfg, spec);
      const auto path = write_csv(dir, id + ".csv", [&](std::ostream& os) { write_custom_csv(os, ctx, result); });
      const auto modes = modes_of(spec.mode);
      for (std::size_t i = 0; i < modes.size(); ++i)
        std::cout << to_string(modes[i]) << " mean SE=" << fmt(result.mean_se[i].mean) << " +- "
                  << fmt(result.mean_se[i].half_width) << " bits/s/Hz\n";
      std::cout << "transmitter direction redraws: " << result.direction_resamples
                << "\nclamped probabilities: " << result.clamps << "\nwrote " << path.string() << '\n';
      break;
    }
  }
  std::cout << "manifest " << emit_manifest(dir, run).string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator for enclosed mmWave wearable networks"};
  app.require_subcommand(1);
  Options opts;

  const std::vector<Command> commands{
      {"validate-blockage", "average blockage probabilities, exact vs stochastic", {ExperimentId::kFig5}},
      {"sinr-cdf", "SINR CDFs per beta_0, reflectivity and blockage mode", {ExperimentId::kFig6}},
      {"mean-se", "mean spectral efficiency vs bandwidth or interferer count",
       {ExperimentId::kFig8b, ExperimentId::kFig8a}},
      {"antenna-cdf", "spectral-efficiency CDFs per array size", {ExperimentId::kFig9}},
      {"shadow-sweep", "ceiling vs on-body steering across on-body shadow loss", {ExperimentId::kFig10}},
      {"custom", "replications of one configured scenario", {ExperimentId::kCustom}},
  };

  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", opts.config, "JSON config or run manifest")->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "master seed (U64)");
    sub->add_option("--reps", opts.reps, "replications per grid point");
    sub->add_option("--mode", opts.mode, "blockage mode: exact | stochastic | both");
    sub->add_option("--out", opts.out, "output directory")->capture_default_str();
    sub->add_option("--workers", opts.workers, "worker threads (default: SIM_WORKERS or 1)");
    subs.emplace_back(sub, &cmd);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [sub, cmd] : subs)
      if (sub->parsed()) return run_command(*cmd, opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
