#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "coevo/bench.hpp"
#include "coevo/engine.hpp"
#include "coevo/error.hpp"
#include "coevo/instance.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitGeneration = 3;

struct SolveArgs {
  std::string instance;
  int factories = 1;
  std::uint64_t seed = 1;
  std::string generator = "random";
  int pop = 100;
  int iters = 200;
  double epsilon = 0.05;
  std::string mode = "full";
  std::string dump_schedule;
  std::string lb_registry;
};

int solve(const SolveArgs& a) {
  auto inst = coevo::load_fjs(a.instance);
  if (a.factories > 1) inst = inst.with_factories(a.factories);
  if (!a.lb_registry.empty()) {
    const auto registry = coevo::load_lb_registry(a.lb_registry);
    if (auto it = registry.find(inst.name()); it != registry.end()) inst = inst.with_known_lb(it->second);
  }
  coevo::EngineConfig cfg;
  cfg.seed = a.seed;
  cfg.pop_size = a.pop;
  cfg.max_iters = a.iters;
  cfg.epsilon = a.epsilon;
  const auto mode = coevo::mode_from_name(a.mode);
  if (!mode) throw coevo::Error(coevo::ErrorCode::ConfigInvalid, fmt::format("unknown mode '{}'", a.mode));
  cfg.mode = *mode;

  auto endpoint = coevo::make_generator(a.generator);
  const auto result = coevo::run(inst, cfg, *endpoint);
  fmt::print("instance {}: makespan {} ({} x {}, seed {}, {:.2f}s, {} operator replacements)\n", inst.name(),
             result.best_makespan, inst.job_count(), inst.machine_count(), a.seed, result.wall_time,
             result.operator_log.size());
  if (inst.known_lb()) {
    fmt::print("LB {}: RPD {:.2f}%\n", *inst.known_lb(),
               coevo::rpd(static_cast<double>(result.best_makespan), static_cast<double>(*inst.known_lb())));
  }
  if (!a.dump_schedule.empty()) {
    std::ofstream out(a.dump_schedule);
    out << coevo::schedule_to_json(coevo::decode(result.best_chromosome, inst), inst) << '\n';
    if (!out) throw coevo::Error(coevo::ErrorCode::IoError, fmt::format("cannot write '{}'", a.dump_schedule));
  }
  return 0;
}

int validate_file(const std::string& path) {
  const auto inst = coevo::load_fjs(path);
  const auto problems = coevo::validate(inst);
  for (const auto& v : problems) fmt::print(stderr, "{}\n", v.describe());
  if (!problems.empty()) return kExitInvalid;
  fmt::print("{}: {} jobs, {} machines, {} operations\n", inst.name(), inst.job_count(), inst.machine_count(),
             inst.total_ops());
  return 0;
}

int bench(const std::string& spec_path, const std::string& out_dir) {
  const auto spec = coevo::load_experiment_spec(spec_path);
  const auto report = coevo::run_experiment(spec);
  coevo::emit_outputs(report, out_dir);
  for (const auto& ir : report.instances) {
    const auto& s = ir.summary;
    fmt::print("{:<12} BM {:>6} AM {:>9.2f}", s.name, s.bm, s.am);
    if (s.rpd_bm) fmt::print("  RPD_BM {:>6.2f} RPD_AM {:>6.2f}", *s.rpd_bm, *s.rpd_am);
    fmt::print("\n");
  }
  if (report.rpd_aver_bm) fmt::print("RPD_aver {:.2f} / {:.2f}\n", *report.rpd_aver_bm, *report.rpd_aver_am);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flexible job shop solver with co-evolving gene-selection operators"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  solve_cmd->add_option("--instance", solve_args.instance, ".fjs file")->required();
  solve_cmd->add_option("--factories", solve_args.factories, "Identical factories (DFJSP when > 1)")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--seed", solve_args.seed);
  solve_cmd->add_option("--generator", solve_args.generator, "spt, mwr, random or remote");
  solve_cmd->add_option("--pop", solve_args.pop)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--iters", solve_args.iters)->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--epsilon", solve_args.epsilon)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--mode", solve_args.mode, "full, no-evolution, single-operator or no-analysis");
  solve_cmd->add_option("--lb-registry", solve_args.lb_registry, "name<TAB>LB file");
  solve_cmd->add_option("--dump-schedule", solve_args.dump_schedule, "Write the best schedule as JSON");

  std::string spec_path;
  std::string out_dir;
  auto* bench_cmd = app.add_subcommand("bench", "Run a multi-run experiment");
  bench_cmd->add_option("--spec", spec_path, "key = value experiment file")->required();
  bench_cmd->add_option("--out", out_dir, "Output directory")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check an instance file");
  validate_cmd->add_option("--instance", validate_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*solve_cmd) return solve(solve_args);
    if (*bench_cmd) return bench(spec_path, out_dir);
    if (*validate_cmd) return validate_file(validate_path);
  } catch (const coevo::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return e.code() == coevo::ErrorCode::GenerationExhausted ? kExitGeneration : kExitInvalid;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInvalid;
  }
  return 0;
}
