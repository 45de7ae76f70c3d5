#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coevo/genetics.hpp"
#include "coevo/llm_bridge.hpp"
#include "coevo/meta_operator.hpp"

namespace coevo {

enum class EngineMode {
  Full,
  NoEvolution,     // operators are generated once and never replaced
  SingleOperator,  // one operator, still evolved
  NoAnalysis,      // evolution without the analysis step
};

std::string_view mode_name(EngineMode mode);
std::optional<EngineMode> mode_from_name(std::string_view name);

struct EngineConfig {
  int pop_size = 100;
  int max_iters = 200;
  int operator_pop_size = 3;
  double p_crossover = 0.9;
  double p_mutation = 0.9;
  double epsilon = 0.05;
  int tournament_k = 2;
  InitMix init_mix;
  std::uint64_t seed = 1;
  int max_retries = 5;
  EngineMode mode = EngineMode::Full;

  /// Throws ConfigInvalid.
  void validate() const;
};

struct OperatorLogEntry {
  int iteration = 0;
  int replaced_id = 0;
  Operator op;
};

struct RunResult {
  Chromosome best_chromosome;
  Time best_makespan = 0;
  std::vector<Time> convergence;  // entry 0 is the initial population
  std::vector<Operator> initial_operators;
  std::vector<OperatorLogEntry> operator_log;
  std::vector<Operator> final_operators;
  std::uint64_t rng_seed = 0;
  double wall_time = 0;  // seconds

  /// Compares everything except wall_time.
  bool same_outcome(const RunResult& other) const;
};

RunResult run(const Instance& inst, const EngineConfig& cfg, HeuristicGenerator& endpoint);

/// Relative percentage deviation from a lower bound. Throws NonPositiveLB.
double rpd(double value, double lb);

std::string operators_to_json(const RunResult& result);

}  // namespace coevo
