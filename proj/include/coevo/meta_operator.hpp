#pragma once

#include <span>
#include <string>
#include <vector>

#include "coevo/expr.hpp"
#include "coevo/features.hpp"
#include "coevo/genetics.hpp"
#include "coevo/rng.hpp"

namespace coevo {

struct Origin {
  enum class Kind { Seeded, Generated, Evolved };
  Kind kind = Kind::Generated;
  int iteration = 0;  // meaningful for Evolved only
  bool operator==(const Origin&) const = default;
};

/// A gene-selection heuristic: one priority expression per gene level plus its
/// success record since the last reset.
struct Operator {
  int id = 0;
  std::string thought;
  PriorityExpr job_expr;
  PriorityExpr op_expr;
  long successes = 0;
  long visits = 0;
  Origin origin;
};

/// Success ratio; an unvisited operator scores 1.0 so that it gets tried.
double operator_fitness(const Operator& op);

/// Per-gene priorities of one level, before normalization.
std::vector<double> gene_priorities(const Operator& op, const FeatureTable& ft, GeneLevel level);

/// Gene k is selected iff probability[k] > draws[k]; an empty result falls back
/// to the gene with the largest probability (first one on ties).
std::vector<int> select_with_draws(std::span<const double> probability, std::span<const double> draws);

GeneSet select_genes(const Operator& op, const FeatureTable& ft, GeneLevel level, Rng& rng);

/// Index drawn with probability proportional to weight; uniform if all are zero.
std::size_t roulette_index(std::span<const double> weights, Rng& rng);
std::size_t roulette_select(std::span<const Operator> ops, Rng& rng);

/// Stagnation threshold 1/(epsilon * stall); infinite when stall is 0.
double trigger_threshold(long stall, double epsilon);
/// Draws u ~ U[0,1) and reports whether u exceeds the threshold.
bool trigger_check(long stall, double epsilon, Rng& rng);

/// Replaces the lowest-fitness operator (lowest index on ties) and resets every
/// operator's counters. Returns the replaced index.
std::size_t replace_worst(std::vector<Operator>& ops, Operator fresh);

std::string origin_to_string(const Origin& origin);
std::string operator_to_json(const Operator& op);

}  // namespace coevo
