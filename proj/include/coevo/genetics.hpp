#pragma once

#include <span>
#include <utility>
#include <vector>

#include "coevo/rng.hpp"
#include "coevo/schedule.hpp"

namespace coevo {

enum class GeneLevel { Job, Operation };

/// Genes chosen for perturbation: job ids (Job level) or flat operation indices
/// (Operation level). Members are kept sorted and unique.
struct GeneSet {
  GeneLevel level = GeneLevel::Job;
  std::vector<int> members;

  static GeneSet jobs(std::vector<int> ids);
  static GeneSet operations(std::vector<int> flat_ids);
  bool contains(int id) const;
  bool operator==(const GeneSet&) const = default;
};

// ---------------------------------------------------------------- initialization

enum class AssignmentRule { GlobalMinimum, PermutedGlobalMinimum };
enum class DispatchRule { Random, MostWorkRemaining, MostOperationsRemaining };

struct InitMix {
  double global_min = 0.1;  // Rule 1; the rest use the permuted variant
  double random_dispatch = 0.2;
  double mwr_dispatch = 0.4;  // the rest use MOR
};

struct InitPlan {
  AssignmentRule assignment;
  DispatchRule dispatch;
};

/// Rule labels for each individual of a population of `size`. Counts are rounded
/// to nearest; dispatch labels are shuffled so they pair independently with
/// assignment labels.
std::vector<InitPlan> plan_initialization(int size, const InitMix& mix, Rng& rng);

/// Machine assignment by repeatedly taking the smallest load-adjusted entry of
/// the remaining processing-time matrix. With `permute`, jobs and machines are
/// randomly relabelled first, which changes how ties resolve.
std::vector<int> assign_machines(const Instance& inst, const std::vector<int>& fav, bool permute, Rng& rng);

/// Builds an OSV from a fixed machine assignment using a dispatching rule.
std::vector<int> dispatch_sequence(const Instance& inst, const std::vector<int>& mav, DispatchRule rule, Rng& rng);

/// Factory per job: jobs in random order, each to the factory with least total
/// minimal work so far. Empty for single-factory instances.
std::vector<int> assign_factories(const Instance& inst, Rng& rng);

std::vector<Chromosome> init_population(const Instance& inst, int size, const InitMix& mix, Rng& rng);

// ---------------------------------------------------------------- neighborhood moves

/// Precedence-preserving order-based crossover on the OSV. Each child keeps the
/// positions of the selected jobs from its own parent and fills the remaining
/// positions with the other parent's non-selected genes, in that parent's order.
std::pair<Chromosome, Chromosome> pox_crossover(const Chromosome& p1, const Chromosome& p2, const GeneSet& jobs);

/// Exchanges the machines of the selected operations between the parents.
std::pair<Chromosome, Chromosome> mav_crossover(const Chromosome& p1, const Chromosome& p2, const GeneSet& ops);

/// Precedence-preserving shift: one selected operation is moved to a random
/// position strictly between its job predecessor and job successor.
Chromosome pps_mutation(const Chromosome& p, const GeneSet& ops, const Instance& inst, Rng& rng);

/// Each selected operation with an alternative machine gets a different one.
Chromosome mav_mutation(const Chromosome& p, const GeneSet& ops, const Instance& inst, Rng& rng);

/// Critical-operation swapping. Returns a chromosome whose makespan never exceeds
/// the input's.
Chromosome critical_swap(const Chromosome& chrom, const Instance& inst, const Schedule& sched, Rng& rng);

/// Swaps the factories of the jobs that own the selected operations.
std::pair<Chromosome, Chromosome> factory_crossover(const Chromosome& p1, const Chromosome& p2, const GeneSet& ops,
                                                    const Instance& inst);

/// Machine resampling inside each job's current factory.
Chromosome factory_mutation(const Chromosome& p, const GeneSet& ops, const Instance& inst, Rng& rng);

/// Pivot-based variant of critical_swap: a pivot is tried against every other
/// critical operation before the search stops.
Chromosome modified_critical_swap(const Chromosome& chrom, const Instance& inst, const Schedule& sched, Rng& rng);

/// Returns the index of the fittest of `k` uniform draws with replacement.
/// Ties keep the earliest draw.
std::size_t tournament_select(std::span<const double> fitness, int k, Rng& rng);

/// Occurrence position of flat operation `flat` in the OSV.
std::size_t osv_position(const std::vector<int>& osv, int flat, const Instance& inst);

}  // namespace coevo
