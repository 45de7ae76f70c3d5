#include "coevo/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

#include "coevo/error.hpp"

namespace coevo {

std::string_view mode_name(EngineMode mode) {
  switch (mode) {
    case EngineMode::Full:
      return "full";
    case EngineMode::NoEvolution:
      return "no-evolution";
    case EngineMode::SingleOperator:
      return "single-operator";
    case EngineMode::NoAnalysis:
      return "no-analysis";
  }
  return "full";
}

std::optional<EngineMode> mode_from_name(std::string_view name) {
  for (auto mode : {EngineMode::Full, EngineMode::NoEvolution, EngineMode::SingleOperator, EngineMode::NoAnalysis}) {
    if (mode_name(mode) == name) return mode;
  }
  return std::nullopt;
}

void EngineConfig::validate() const {
  auto fail = [](std::string msg) { throw Error(ErrorCode::ConfigInvalid, std::move(msg)); };
  if (pop_size < 1) fail("pop_size must be at least 1");
  if (max_iters < 0) fail("max_iters must be non-negative");
  if (operator_pop_size < 1) fail("operator_pop_size must be at least 1");
  if (tournament_k < 1) fail("tournament_k must be at least 1");
  if (max_retries < 1) fail("max_retries must be at least 1");
  for (double p : {p_crossover, p_mutation}) {
    if (!(p >= 0.0 && p <= 1.0)) fail(fmt::format("probability {} outside [0, 1]", p));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail("epsilon must be positive");
  const double mixes[] = {init_mix.global_min, init_mix.random_dispatch, init_mix.mwr_dispatch,
                          init_mix.random_dispatch + init_mix.mwr_dispatch};
  for (double p : mixes) {
    if (!(p >= 0.0 && p <= 1.0)) fail("initialization mix shares must lie in [0, 1]");
  }
}

bool RunResult::same_outcome(const RunResult& other) const {
  auto ops_equal = [](const std::vector<Operator>& a, const std::vector<Operator>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (operator_to_json(a[k]) != operator_to_json(b[k]) || a[k].successes != b[k].successes ||
          a[k].visits != b[k].visits) {
        return false;
      }
    }
    return true;
  };
  if (best_chromosome != other.best_chromosome || best_makespan != other.best_makespan ||
      convergence != other.convergence || rng_seed != other.rng_seed || operator_log.size() != other.operator_log.size()) {
    return false;
  }
  for (std::size_t k = 0; k < operator_log.size(); ++k) {
    const auto& a = operator_log[k];
    const auto& b = other.operator_log[k];
    if (a.iteration != b.iteration || a.replaced_id != b.replaced_id || !ops_equal({a.op}, {b.op})) return false;
  }
  return ops_equal(initial_operators, other.initial_operators) && ops_equal(final_operators, other.final_operators);
}

double rpd(double value, double lb) {
  if (!(lb > 0.0)) throw Error(ErrorCode::NonPositiveLB, fmt::format("lower bound {} is not positive", lb));
  return (value - lb) / lb * 100.0;
}

namespace {

struct Individual {
  Chromosome chrom;
  Schedule sched;

  Time makespan() const { return sched.makespan; }
};

Individual make_individual(Chromosome chrom, const Instance& inst) {
  auto sched = decode(chrom, inst);
  return {std::move(chrom), std::move(sched)};
}

class Run {
public:
  Run(const Instance& inst, const EngineConfig& cfg, HeuristicGenerator& endpoint)
      : inst_(inst), cfg_(cfg), endpoint_(endpoint), rng_(cfg.seed) {}

  RunResult execute() {
    RunResult result;
    result.rng_seed = cfg_.seed;

    init_prompt_ = build_initial_prompt(inst_);
    const int n_ops = cfg_.mode == EngineMode::SingleOperator ? 1 : cfg_.operator_pop_size;
    for (int k = 0; k < n_ops; ++k) {
      ops_.push_back(
          generate_operator(init_prompt_, endpoint_, cfg_.max_retries, rng_, next_id_++, {Origin::Kind::Generated, 0})
              .op);
    }
    result.initial_operators = ops_;

    for (auto& chrom : init_population(inst_, cfg_.pop_size, cfg_.init_mix, rng_)) {
      pop_.push_back(make_individual(std::move(chrom), inst_));
    }
    std::tie(prev_min_fitness_, prev_avg_fitness_) = population_fitness();
    Time best = best_individual().makespan();
    result.convergence.push_back(best);

    long stall = 0;
    for (int t = 1; t <= cfg_.max_iters; ++t) {
      generation();
      const Time now = best_individual().makespan();
      if (now < best) {
        best = now;
        stall = 0;
      } else {
        ++stall;
      }
      if (cfg_.mode != EngineMode::NoEvolution && trigger_check(stall, cfg_.epsilon, rng_)) {
        result.operator_log.push_back(evolve(t));
      }
      result.convergence.push_back(best);
    }

    const auto& winner = best_individual();
    result.best_chromosome = winner.chrom;
    result.best_makespan = winner.makespan();
    result.final_operators = ops_;
    return result;
  }

private:
  const Individual& best_individual() const {
    return *std::min_element(pop_.begin(), pop_.end(),
                             [](const Individual& a, const Individual& b) { return a.makespan() < b.makespan(); });
  }

  std::pair<double, double> population_fitness() const {
    double min_f = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& ind : pop_) {
      const double f = 1.0 / static_cast<double>(ind.makespan());
      min_f = std::min(min_f, f);
      sum += f;
    }
    return {min_f, sum / static_cast<double>(pop_.size())};
  }

  void generation() {
    std::vector<double> fitness;
    fitness.reserve(pop_.size());
    for (const auto& ind : pop_) fitness.push_back(1.0 / static_cast<double>(ind.makespan()));

    const std::size_t elite_index = static_cast<std::size_t>(&best_individual() - pop_.data());
    std::vector<Individual> next;
    next.reserve(pop_.size() + 1);
    next.push_back(pop_[elite_index]);
    while (next.size() < pop_.size()) {
      auto [c1, c2] = pairing_event(fitness);
      next.push_back(std::move(c1));
      if (next.size() < pop_.size()) next.push_back(std::move(c2));
    }
    pop_ = std::move(next);
  }

  std::pair<Individual, Individual> pairing_event(std::span<const double> fitness) {
    const auto& p1 = pop_[tournament_select(fitness, cfg_.tournament_k, rng_)];
    const auto& p2 = pop_[tournament_select(fitness, cfg_.tournament_k, rng_)];
    auto& op = ops_[roulette_select(ops_, rng_)];
    ++op.visits;
    bool success = false;

    Individual c1 = p1;
    Individual c2 = p2;
    if (uniform01(rng_) < cfg_.p_crossover) {
      const auto ft = compute_features(p1.sched, inst_);
      const auto jobs = select_genes(op, ft, GeneLevel::Job, rng_);
      const auto flat = select_genes(op, ft, GeneLevel::Operation, rng_);
      auto [x1, x2] = pox_crossover(p1.chrom, p2.chrom, jobs);
      std::tie(x1, x2) = mav_crossover(x1, x2, flat);
      if (inst_.distributed()) std::tie(x1, x2) = factory_crossover(x1, x2, flat, inst_);
      c1 = make_individual(std::move(x1), inst_);
      c2 = make_individual(std::move(x2), inst_);
      const Time parent_best = std::min(p1.makespan(), p2.makespan());
      success = c1.makespan() < parent_best || c2.makespan() < parent_best;
    }
    for (Individual* child : {&c1, &c2}) {
      if (uniform01(rng_) < cfg_.p_mutation) {
        const auto ft = compute_features(child->sched, inst_);
        const auto flat = select_genes(op, ft, GeneLevel::Operation, rng_);
        // One operation drawn from the gene set is both shifted and reassigned.
        const auto one = GeneSet::operations({flat.members[uniform_index(rng_, flat.members.size())]});
        auto mutated = pps_mutation(child->chrom, one, inst_, rng_);
        mutated = inst_.distributed() ? factory_mutation(mutated, one, inst_, rng_)
                                      : mav_mutation(mutated, one, inst_, rng_);
        auto candidate = make_individual(std::move(mutated), inst_);
        success = success || candidate.makespan() < child->makespan();
        *child = std::move(candidate);
      }
    }
    if (success) ++op.successes;

    for (Individual* child : {&c1, &c2}) {
      auto improved = inst_.distributed() ? modified_critical_swap(child->chrom, inst_, child->sched, rng_)
                                          : critical_swap(child->chrom, inst_, child->sched, rng_);
      if (improved != child->chrom) *child = make_individual(std::move(improved), inst_);
    }
    return {std::move(c1), std::move(c2)};
  }

  OperatorLogEntry evolve(int iteration) {
    std::vector<Time> makespans;
    makespans.reserve(pop_.size());
    for (const auto& ind : pop_) makespans.push_back(ind.makespan());
    auto report = summarize_population(makespans, prev_min_fitness_, prev_avg_fitness_, ops_);
    if (cfg_.mode != EngineMode::NoAnalysis) report.analysis = endpoint_.analyze(analysis_request(report), rng_);

    auto outcome = evolve_operator(init_prompt_, report, endpoint_, cfg_.max_retries, rng_, next_id_++, iteration);
    std::vector<int> ids;
    for (const auto& op : ops_) ids.push_back(op.id);
    OperatorLogEntry entry{iteration, 0, outcome.op};
    entry.replaced_id = ids[replace_worst(ops_, std::move(outcome.op))];

    prev_min_fitness_ = report.min_fitness;
    prev_avg_fitness_ = report.avg_fitness;
    return entry;
  }

  const Instance& inst_;
  const EngineConfig& cfg_;
  HeuristicGenerator& endpoint_;
  Rng rng_;
  PromptBundle init_prompt_;
  std::vector<Operator> ops_;
  std::vector<Individual> pop_;
  int next_id_ = 0;
  double prev_min_fitness_ = 0;
  double prev_avg_fitness_ = 0;
};

}  // namespace

RunResult run(const Instance& inst, const EngineConfig& cfg, HeuristicGenerator& endpoint) {
  cfg.validate();
  if (const auto problems = validate(inst); !problems.empty()) {
    throw Error(ErrorCode::InvalidInstance, problems.front().describe());
  }
  const auto started = std::chrono::steady_clock::now();
  auto result = Run(inst, cfg, endpoint).execute();
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

std::string operators_to_json(const RunResult& result) {
  auto list = [](const std::vector<Operator>& ops) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& op : ops) arr.push_back(nlohmann::ordered_json::parse(operator_to_json(op)));
    return arr;
  };
  auto log = nlohmann::ordered_json::array();
  for (const auto& entry : result.operator_log) {
    log.push_back({{"iteration", entry.iteration},
                   {"replaced_id", entry.replaced_id},
                   {"operator", nlohmann::ordered_json::parse(operator_to_json(entry.op))}});
  }
  nlohmann::ordered_json doc = {{"seed", result.rng_seed},
                                {"initial", list(result.initial_operators)},
                                {"log", log},
                                {"final", list(result.final_operators)}};
  return doc.dump(2);
}

}  // namespace coevo
