// gpcons: distributed GP learning for leader-follower consensus.
//
//   gpcons simulate     --config FILE [--out DIR] [--seed N] [--quiet]
//   gpcons compare      --config FILE ...
//   gpcons bound-report --config FILE ...
//   gpcons gen-data     --config FILE ...
//
// Exit codes: 0 success, 1 runtime failure (divergence, numerics), 2 invalid
// configuration or arguments.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "gpcons/bounds.hpp"
#include "gpcons/config.hpp"
#include "gpcons/experiment.hpp"
#include "gpcons/io.hpp"

namespace fs = std::filesystem;
using namespace gpcons;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

struct Context {
  ExperimentConfig config;
  fs::path out;
  bool quiet = false;

  void note(const std::string& msg) const {
    if (!quiet) std::cout << msg << '\n';
  }
};

Context prepare(const Options& opt) {
  Context ctx;
  ctx.config = opt.config_path.empty() ? default_config() : load_config(opt.config_path);
  if (opt.seed) {
    ctx.config.seed = *opt.seed;
    ctx.config.training.seed = *opt.seed;
    ctx.config.sim.seed = *opt.seed;
  }
  ctx.config.validate();
  if (!opt.out_dir.empty()) {
    ctx.out = opt.out_dir;
  } else if (ctx.config.output_dir) {
    ctx.out = *ctx.config.output_dir;
  } else if (const char* env = std::getenv("GPCONS_OUT"); env && *env) {
    ctx.out = env;
  } else {
    ctx.out = "out";
  }
  fs::create_directories(ctx.out);
  ctx.quiet = opt.quiet;
  return ctx;
}

std::string trajectory_name(ControlMode mode) { return "trajectory_" + to_string(mode) + ".csv"; }

BoundReport make_bound_report(const ExperimentConfig& config, const DynamicsSpec& spec, const Topology& topology,
                              const ModelBank& bank) {
  return build_bound_report(spec, topology, bank.models, config.training.domain, config.bounds, config.sim.gains);
}

int cmd_simulate(const Options& opt) {
  const Context ctx = prepare(opt);
  const auto& cfg = ctx.config;
  const DynamicsSpec spec = cfg.dynamics();
  const Topology topology = cfg.topology();
  const ModelBank bank = train_models(cfg, spec, topology.size());
  const ControlMode mode = cfg.sim.mode;
  const fs::path csv = ctx.out / trajectory_name(mode);

  ModeResult result;
  try {
    result = run_mode(cfg, mode, spec, topology, bank);
  } catch (const DivergenceError& e) {
    io::write_trajectory_csv(csv, e.partial());
    throw;
  }
  io::write_trajectory_csv(csv, result.log);

  BoundReport report = make_bound_report(cfg, spec, topology, bank);
  report.set_trajectory_nu(result.nu_tail);
  io::write_json(ctx.out / "bound_report.json", to_json(report));
  io::write_json(ctx.out / "manifest.json",
                 run_manifest(cfg, "simulate", {csv.filename().string(), "bound_report.json"}));
  ctx.note("wrote " + csv.string());
  return 0;
}

int cmd_compare(const Options& opt) {
  const Context ctx = prepare(opt);
  const Comparison cmp = compare_modes(ctx.config);
  std::vector<std::string> artifacts;
  for (const auto& r : cmp.results) {
    const std::string name = trajectory_name(r.mode);
    io::write_trajectory_csv(ctx.out / name, r.log);
    artifacts.push_back(name);
  }
  io::write_json(ctx.out / "summary.json", to_json(cmp, ctx.config.tail_fraction));
  artifacts.push_back("summary.json");
  io::write_json(ctx.out / "manifest.json", run_manifest(ctx.config, "compare", artifacts));
  for (const auto& r : cmp.results) {
    std::string line = to_string(r.mode) + ": tail-mean E =";
    for (Index j = 0; j < r.tail_mean.size(); ++j) line += " " + io::format_double(r.tail_mean(j));
    ctx.note(line);
  }
  ctx.note(std::string("ordering distributed < individual < none: ") + (cmp.ordering_holds() ? "holds" : "violated"));
  return 0;
}

int cmd_bound_report(const Options& opt) {
  const Context ctx = prepare(opt);
  const auto& cfg = ctx.config;
  const DynamicsSpec spec = cfg.dynamics();
  const Topology topology = cfg.topology();
  const ModelBank bank = train_models(cfg, spec, topology.size());
  BoundReport report = make_bound_report(cfg, spec, topology, bank);
  const ModeResult dist = run_mode(cfg, ControlMode::DistributedGP, spec, topology, bank);
  report.set_trajectory_nu(dist.nu_tail);
  io::write_json(ctx.out / "bound_report.json", to_json(report));
  io::write_json(ctx.out / "manifest.json", run_manifest(cfg, "bound-report", {"bound_report.json"}));
  ctx.note("beta = " + io::format_double(report.beta) + ", radius (trajectory tail) = " +
           io::format_double(*report.radius_trajectory_tail));
  return 0;
}

int cmd_gen_data(const Options& opt) {
  const Context ctx = prepare(opt);
  const DynamicsSpec spec = ctx.config.dynamics();
  const auto sets = generate_training_data(spec, ctx.config.training, ctx.config.topology().size());
  std::vector<std::string> artifacts;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (Index k = 0; k < spec.dim; ++k) {
      const std::string name = "train_agent" + std::to_string(i + 1) + "_dim" + std::to_string(k + 1) + ".csv";
      io::write_dataset_csv(ctx.out / name, sets[i].for_dim(k));
      artifacts.push_back(name);
    }
  }
  io::write_json(ctx.out / "manifest.json", run_manifest(ctx.config, "gen-data", artifacts));
  ctx.note("wrote " + std::to_string(artifacts.size()) + " training files to " + ctx.out.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed GP learning for leader-follower consensus control"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Experiment config (JSON); built-in defaults if omitted")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "Output directory (default: config output_dir, $GPCONS_OUT, ./out)");
    sub->add_option("--seed", opt.seed, "Override the config seed");
    sub->add_flag("--quiet", opt.quiet, "Suppress progress output");
  };

  auto* simulate = app.add_subcommand("simulate", "Run one control mode and write its trajectory");
  auto* compare = app.add_subcommand("compare", "Run all three control modes on shared data");
  auto* bound = app.add_subcommand("bound-report", "Compute uniform error bounds and the ultimate-bound radius");
  auto* gen = app.add_subcommand("gen-data", "Write the per-agent training sets as CSV");
  for (auto* sub : {simulate, compare, bound, gen}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*simulate) return cmd_simulate(opt);
    if (*compare) return cmd_compare(opt);
    if (*bound) return cmd_bound_report(opt);
    if (*gen) return cmd_gen_data(opt);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << " (partial trajectory written)\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}
