#include "coevo/meta_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "coevo/error.hpp"

namespace coevo {

double operator_fitness(const Operator& op) {
  if (op.visits <= 0) return 1.0;
  return static_cast<double>(op.successes) / static_cast<double>(op.visits);
}

std::vector<double> gene_priorities(const Operator& op, const FeatureTable& ft, GeneLevel level) {
  std::vector<double> priorities;
  if (level == GeneLevel::Job) {
    priorities.reserve(ft.jobs.size());
    for (const auto& job : ft.jobs) priorities.push_back(op.job_expr.evaluate(Bindings::for_job(job)));
  } else {
    priorities.reserve(ft.ops.size());
    for (const auto& o : ft.ops) priorities.push_back(op.op_expr.evaluate(Bindings::for_op(o)));
  }
  return priorities;
}

std::vector<int> select_with_draws(std::span<const double> probability, std::span<const double> draws) {
  std::vector<int> chosen;
  for (std::size_t k = 0; k < probability.size(); ++k) {
    if (probability[k] > draws[k]) chosen.push_back(static_cast<int>(k));
  }
  if (chosen.empty() && !probability.empty()) {
    chosen.push_back(static_cast<int>(std::max_element(probability.begin(), probability.end()) - probability.begin()));
  }
  return chosen;
}

GeneSet select_genes(const Operator& op, const FeatureTable& ft, GeneLevel level, Rng& rng) {
  const auto gamma = normalize_cdf(gene_priorities(op, ft, level));
  std::vector<double> draws(gamma.size());
  for (auto& u : draws) u = uniform01(rng);
  auto members = select_with_draws(gamma, draws);
  return level == GeneLevel::Job ? GeneSet::jobs(std::move(members)) : GeneSet::operations(std::move(members));
}

std::size_t roulette_index(std::span<const double> weights, Rng& rng) {
  if (weights.empty()) throw Error(ErrorCode::ConfigInvalid, "roulette over an empty set");
  double total = 0.0;
  for (double w : weights) total += std::max(w, 0.0);
  if (!(total > 0.0)) return uniform_index(rng, weights.size());
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    last_positive = k;
    if (target < acc) return k;
  }
  return last_positive;
}

std::size_t roulette_select(std::span<const Operator> ops, Rng& rng) {
  std::vector<double> weights;
  weights.reserve(ops.size());
  for (const auto& op : ops) weights.push_back(operator_fitness(op));
  return roulette_index(weights, rng);
}

double trigger_threshold(long stall, double epsilon) {
  if (stall <= 0) return std::numeric_limits<double>::infinity();
  return 1.0 / (epsilon * static_cast<double>(stall));
}

bool trigger_check(long stall, double epsilon, Rng& rng) {
  const double u = uniform01(rng);
  return u > trigger_threshold(stall, epsilon);
}

std::size_t replace_worst(std::vector<Operator>& ops, Operator fresh) {
  if (ops.empty()) throw Error(ErrorCode::ConfigInvalid, "operator population is empty");
  std::size_t worst = 0;
  for (std::size_t k = 1; k < ops.size(); ++k) {
    if (operator_fitness(ops[k]) < operator_fitness(ops[worst])) worst = k;
  }
  ops[worst] = std::move(fresh);
  for (auto& op : ops) {
    op.successes = 0;
    op.visits = 0;
  }
  return worst;
}

std::string origin_to_string(const Origin& origin) {
  switch (origin.kind) {
    case Origin::Kind::Seeded: return "seeded";
    case Origin::Kind::Generated: return "generated";
    case Origin::Kind::Evolved: return "evolved@" + std::to_string(origin.iteration);
  }
  return "unknown";
}

std::string operator_to_json(const Operator& op) {
  nlohmann::ordered_json doc = {{"id", op.id},
                                {"thought", op.thought},
                                {"job_expr", op.job_expr.to_string()},
                                {"op_expr", op.op_expr.to_string()},
                                {"origin", origin_to_string(op.origin)}};
  return doc.dump();
}

}  // namespace coevo
