#include <algorithm>

#include "coevo/error.hpp"
#include "coevo/genetics.hpp"

namespace coevo {

namespace {

void require_members(const GeneSet& genes, GeneLevel level, const char* move) {
  if (genes.members.empty()) throw Error(ErrorCode::EmptyGeneSet, move);
  if (genes.level != level) {
    throw Error(ErrorCode::ConfigInvalid,
                std::string(move) + (level == GeneLevel::Job ? " needs job-level genes" : " needs operation-level genes"));
  }
}

void require_distributed(const Instance& inst, const char* move) {
  if (!inst.distributed()) throw Error(ErrorCode::NotDistributed, move);
}

int pick_other_machine(std::span<const Alternative> alts, int current, Rng& rng) {
  const auto r = uniform_index(rng, alts.size() - 1);
  std::size_t seen = 0;
  for (const auto& alt : alts) {
    if (alt.machine == current) continue;
    if (seen++ == r) return alt.machine;
  }
  return current;
}

Chromosome resample_machines(const Chromosome& p, const GeneSet& ops, const Instance& inst, Rng& rng) {
  Chromosome child = p;
  for (int flat : ops.members) {
    const auto alts = inst.eligible(flat);
    if (alts.size() > 1) child.mav[flat] = pick_other_machine(alts, child.mav[flat], rng);
  }
  return child;
}

/// OSV positions of the same job's previous and next genes, for O(1) checks
/// that a swap of two genes does not reorder operations within a job.
struct Neighbors {
  std::vector<int> prev_same;
  std::vector<int> next_same;

  explicit Neighbors(const std::vector<int>& osv, int jobs) {
    const int n = static_cast<int>(osv.size());
    prev_same.assign(n, -1);
    next_same.assign(n, n);
    std::vector<int> last(jobs, -1);
    for (int p = 0; p < n; ++p) {
      const int job = osv[p];
      if (last[job] >= 0) {
        prev_same[p] = last[job];
        next_same[last[job]] = p;
      }
      last[job] = p;
    }
  }

  bool swappable(int a, int b) const {
    if (a > b) std::swap(a, b);
    return next_same[a] > b && prev_same[b] < a;
  }
};

std::vector<int> critical_positions(const std::vector<int>& path, const Chromosome& chrom, const Instance& inst) {
  std::vector<int> positions;
  positions.reserve(path.size());
  for (int flat : path) positions.push_back(static_cast<int>(osv_position(chrom.osv, flat, inst)));
  return positions;
}

}  // namespace

std::size_t osv_position(const std::vector<int>& osv, int flat, const Instance& inst) {
  const auto ref = inst.op_ref(flat);
  int seen = 0;
  for (std::size_t p = 0; p < osv.size(); ++p) {
    if (osv[p] == ref.job && seen++ == ref.op) return p;
  }
  throw Error(ErrorCode::InfeasibleChromosome, "operation missing from OSV");
}

std::pair<Chromosome, Chromosome> pox_crossover(const Chromosome& p1, const Chromosome& p2, const GeneSet& jobs) {
  require_members(jobs, GeneLevel::Job, "pox_crossover");
  if (p1.osv.size() != p2.osv.size()) throw Error(ErrorCode::InfeasibleChromosome, "parents differ in length");

  const auto build = [&jobs](const Chromosome& keeper, const Chromosome& donor) {
    Chromosome child = keeper;
    auto fill = donor.osv.begin();
    for (auto& gene : child.osv) {
      if (jobs.contains(gene)) continue;
      while (jobs.contains(*fill)) ++fill;
      gene = *fill++;
    }
    return child;
  };
  return {build(p1, p2), build(p2, p1)};
}

std::pair<Chromosome, Chromosome> mav_crossover(const Chromosome& p1, const Chromosome& p2, const GeneSet& ops) {
  require_members(ops, GeneLevel::Operation, "mav_crossover");
  Chromosome c1 = p1;
  Chromosome c2 = p2;
  for (int flat : ops.members) std::swap(c1.mav[flat], c2.mav[flat]);
  return {std::move(c1), std::move(c2)};
}

Chromosome pps_mutation(const Chromosome& p, const GeneSet& ops, const Instance& inst, Rng& rng) {
  require_members(ops, GeneLevel::Operation, "pps_mutation");
  const int flat = ops.members[uniform_index(rng, ops.members.size())];
  const auto ref = inst.op_ref(flat);
  const int n = static_cast<int>(p.osv.size());

  const int from = static_cast<int>(osv_position(p.osv, flat, inst));
  const int left = ref.op > 0 ? static_cast<int>(osv_position(p.osv, flat - 1, inst)) : -1;
  const int right = ref.op + 1 < inst.op_count(ref.job) ? static_cast<int>(osv_position(p.osv, flat + 1, inst)) : n;

  // After removing the gene at `from`, valid insertion indices are left+1 .. right-1.
  const int slots = right - 1 - left;
  const int to = left + 1 + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(slots)));

  Chromosome child = p;
  child.osv.erase(child.osv.begin() + from);
  child.osv.insert(child.osv.begin() + to, ref.job);
  return child;
}

Chromosome mav_mutation(const Chromosome& p, const GeneSet& ops, const Instance& inst, Rng& rng) {
  require_members(ops, GeneLevel::Operation, "mav_mutation");
  return resample_machines(p, ops, inst, rng);
}

Chromosome critical_swap(const Chromosome& chrom, const Instance& inst, const Schedule& sched, Rng& rng) {
  Chromosome best = chrom;
  Schedule current = sched;
  std::vector<std::pair<int, int>> pairs;
  while (true) {
    const auto path = critical_path(current, inst);
    if (path.size() < 2) return best;
    const auto positions = critical_positions(path, best, inst);
    const Neighbors neighbors(best.osv, inst.job_count());

    pairs.clear();
    for (std::size_t a = 0; a < path.size(); ++a) {
      for (std::size_t b = a + 1; b < path.size(); ++b) {
        if (inst.job_of(path[a]) == inst.job_of(path[b])) continue;
        if (neighbors.swappable(positions[a], positions[b])) pairs.emplace_back(positions[a], positions[b]);
      }
    }
    if (pairs.empty()) return best;

    const auto [pa, pb] = pairs[uniform_index(rng, pairs.size())];
    Chromosome candidate = best;
    std::swap(candidate.osv[pa], candidate.osv[pb]);
    Schedule decoded = decode(candidate, inst);
    if (decoded.makespan >= current.makespan) return best;
    best = std::move(candidate);
    current = std::move(decoded);
  }
}

std::pair<Chromosome, Chromosome> factory_crossover(const Chromosome& p1, const Chromosome& p2, const GeneSet& ops,
                                                    const Instance& inst) {
  require_distributed(inst, "factory_crossover");
  require_members(ops, GeneLevel::Operation, "factory_crossover");
  Chromosome c1 = p1;
  Chromosome c2 = p2;
  int last_job = -1;
  for (int flat : ops.members) {
    const int job = inst.job_of(flat);
    if (job == last_job) continue;  // members are sorted, so a job's operations are contiguous
    last_job = job;
    std::swap(c1.fav[job], c2.fav[job]);
  }
  return {std::move(c1), std::move(c2)};
}

Chromosome factory_mutation(const Chromosome& p, const GeneSet& ops, const Instance& inst, Rng& rng) {
  require_distributed(inst, "factory_mutation");
  require_members(ops, GeneLevel::Operation, "factory_mutation");
  // Factories share one machine layout, so the eligible set is the same in every factory.
  return resample_machines(p, ops, inst, rng);
}

Chromosome modified_critical_swap(const Chromosome& chrom, const Instance& inst, const Schedule& sched, Rng& rng) {
  Chromosome best = chrom;
  Schedule current = sched;
  while (true) {
    const auto path = critical_path(current, inst);
    if (path.size() < 2) return best;
    const auto positions = critical_positions(path, best, inst);
    const Neighbors neighbors(best.osv, inst.job_count());

    const auto pivot = uniform_index(rng, path.size());
    bool improved = false;
    for (std::size_t other = 0; other < path.size() && !improved; ++other) {
      if (other == pivot || inst.job_of(path[other]) == inst.job_of(path[pivot])) continue;
      if (!neighbors.swappable(positions[pivot], positions[other])) continue;
      Chromosome candidate = best;
      std::swap(candidate.osv[positions[pivot]], candidate.osv[positions[other]]);
      Schedule decoded = decode(candidate, inst);
      if (decoded.makespan < current.makespan) {
        best = std::move(candidate);
        current = std::move(decoded);
        improved = true;
      }
    }
    if (!improved) return best;
  }
}

std::size_t tournament_select(std::span<const double> fitness, int k, Rng& rng) {
  if (fitness.empty()) throw Error(ErrorCode::ConfigInvalid, "tournament over an empty population");
  if (k < 1) throw Error(ErrorCode::ConfigInvalid, "tournament size must be >= 1");
  std::size_t best = uniform_index(rng, fitness.size());
  for (int draw = 1; draw < k; ++draw) {
    const std::size_t challenger = uniform_index(rng, fitness.size());
    if (fitness[challenger] > fitness[best]) best = challenger;
  }
  return best;
}

}  // namespace coevo
