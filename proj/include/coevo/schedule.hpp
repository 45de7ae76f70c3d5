#pragma once

#include <string>
#include <vector>

#include "coevo/instance.hpp"

namespace coevo {

/// Two-vector encoding plus the optional factory vector.
///
/// `osv` holds job ids; the k-th occurrence of job i stands for operation (i, k).
/// `mav` holds one machine per operation in canonical flat order.
/// `fav` holds one factory per job and is empty for single-factory instances.
struct Chromosome {
  std::vector<int> osv;
  std::vector<int> mav;
  std::vector<int> fav;

  bool operator==(const Chromosome&) const = default;
};

/// Decoded timetable; every vector is indexed by flat operation index.
struct Schedule {
  std::vector<Time> start;
  std::vector<Time> finish;
  std::vector<int> machine;
  std::vector<int> factory;
  Time makespan = 0;

  bool operator==(const Schedule&) const = default;
};

/// Throws InfeasibleChromosome when the chromosome does not fit the instance.
void check_chromosome(const Chromosome& chrom, const Instance& inst);

/// Active decoding with gap insertion: each operation, in OSV order, is placed in
/// the earliest idle interval of its machine that starts no earlier than its job
/// predecessor's finish and is long enough to hold it.
Schedule decode(const Chromosome& chrom, const Instance& inst);

/// Makespan only; same result as decode(chrom, inst).makespan.
Time makespan(const Chromosome& chrom, const Instance& inst);

/// Chain of tight operations from a time-0 start to an operation finishing at the
/// makespan, returned in time order as flat indices. Machine predecessors win ties.
std::vector<int> critical_path(const Schedule& sched, const Instance& inst);

/// True iff the schedule satisfies assignment, duration, precedence and
/// machine-capacity constraints and its makespan is the latest finish.
bool check_feasible(const Schedule& sched, const Instance& inst);

/// JSON export: {makespan, ops:[{job, op, machine, factory, start, finish}]}, 0-based ids.
std::string schedule_to_json(const Schedule& sched, const Instance& inst);

}  // namespace coevo
