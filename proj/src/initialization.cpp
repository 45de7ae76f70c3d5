#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "coevo/error.hpp"
#include "coevo/genetics.hpp"

namespace coevo {

GeneSet GeneSet::jobs(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return {GeneLevel::Job, std::move(ids)};
}

GeneSet GeneSet::operations(std::vector<int> flat_ids) {
  std::sort(flat_ids.begin(), flat_ids.end());
  flat_ids.erase(std::unique(flat_ids.begin(), flat_ids.end()), flat_ids.end());
  return {GeneLevel::Operation, std::move(flat_ids)};
}

bool GeneSet::contains(int id) const { return std::binary_search(members.begin(), members.end(), id); }

std::vector<InitPlan> plan_initialization(int size, const InitMix& mix, Rng& rng) {
  if (size < 1) throw Error(ErrorCode::ConfigInvalid, "population size must be >= 1");
  const auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(mix.global_min) || !in_unit(mix.random_dispatch) || !in_unit(mix.mwr_dispatch) ||
      mix.random_dispatch + mix.mwr_dispatch > 1.0 + 1e-12) {
    throw Error(ErrorCode::ConfigInvalid, "initialization mix fractions must lie in [0,1] and sum to at most 1");
  }
  const auto count = [size](double fraction) {
    return std::clamp(static_cast<int>(std::lround(fraction * size)), 0, size);
  };
  const int global_min = count(mix.global_min);
  const int random = count(mix.random_dispatch);
  const int mwr = std::min(count(mix.mwr_dispatch), size - random);

  std::vector<DispatchRule> dispatch(size, DispatchRule::MostOperationsRemaining);
  std::fill_n(dispatch.begin(), random, DispatchRule::Random);
  std::fill_n(dispatch.begin() + random, mwr, DispatchRule::MostWorkRemaining);
  shuffle_range(dispatch.begin(), dispatch.end(), rng);

  std::vector<InitPlan> plan(size);
  for (int k = 0; k < size; ++k) {
    plan[k].assignment = k < global_min ? AssignmentRule::GlobalMinimum : AssignmentRule::PermutedGlobalMinimum;
    plan[k].dispatch = dispatch[k];
  }
  return plan;
}

std::vector<int> assign_factories(const Instance& inst, Rng& rng) {
  if (!inst.distributed()) return {};
  std::vector<int> order(inst.job_count());
  std::iota(order.begin(), order.end(), 0);
  shuffle_range(order.begin(), order.end(), rng);

  std::vector<Time> load(inst.factory_count(), 0);
  std::vector<int> fav(inst.job_count(), 0);
  for (int job : order) {
    Time work = 0;
    for (int j = 0; j < inst.op_count(job); ++j) work += inst.min_proc_time(inst.flat_index(job, j));
    const auto f = static_cast<int>(std::min_element(load.begin(), load.end()) - load.begin());
    fav[job] = f;
    load[f] += work;
  }
  return fav;
}

std::vector<int> assign_machines(const Instance& inst, const std::vector<int>& fav, bool permute, Rng& rng) {
  const int n = inst.total_ops();
  const int machines = inst.machine_count();

  std::vector<int> job_rank(inst.job_count());
  std::vector<int> machine_rank(machines);
  std::iota(job_rank.begin(), job_rank.end(), 0);
  std::iota(machine_rank.begin(), machine_rank.end(), 0);
  if (permute) {
    shuffle_range(job_rank.begin(), job_rank.end(), rng);
    shuffle_range(machine_rank.begin(), machine_rank.end(), rng);
  }

  std::vector<Time> load(static_cast<std::size_t>(inst.factory_count()) * machines, 0);
  std::vector<int> mav(n, -1);
  std::vector<int> pending(n);
  std::iota(pending.begin(), pending.end(), 0);

  while (!pending.empty()) {
    std::size_t best_slot = 0;
    int best_machine = -1;
    Time best_value = std::numeric_limits<Time>::max();
    std::tuple<int, int, int> best_key{};
    for (std::size_t slot = 0; slot < pending.size(); ++slot) {
      const int flat = pending[slot];
      const int job = inst.job_of(flat);
      const int factory = fav.empty() ? 0 : fav[job];
      for (const auto& alt : inst.eligible(flat)) {
        const Time value = load[static_cast<std::size_t>(factory) * machines + alt.machine] + alt.time;
        const std::tuple<int, int, int> key{job_rank[job], flat, machine_rank[alt.machine]};
        if (value < best_value || (value == best_value && key < best_key)) {
          best_value = value;
          best_key = key;
          best_slot = slot;
          best_machine = alt.machine;
        }
      }
    }
    const int flat = pending[best_slot];
    const int factory = fav.empty() ? 0 : fav[inst.job_of(flat)];
    mav[flat] = best_machine;
    load[static_cast<std::size_t>(factory) * machines + best_machine] += inst.proc_time(flat, best_machine);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best_slot));
  }
  return mav;
}

std::vector<int> dispatch_sequence(const Instance& inst, const std::vector<int>& mav, DispatchRule rule, Rng& rng) {
  const int jobs = inst.job_count();
  std::vector<int> next(jobs, 0);
  std::vector<Time> work(jobs, 0);
  for (int k = 0; k < inst.total_ops(); ++k) work[inst.job_of(k)] += inst.proc_time(k, mav[k]);

  std::vector<int> osv;
  osv.reserve(inst.total_ops());
  std::vector<int> tied;
  for (int step = 0; step < inst.total_ops(); ++step) {
    tied.clear();
    Time best = std::numeric_limits<Time>::min();
    for (int i = 0; i < jobs; ++i) {
      if (next[i] >= inst.op_count(i)) continue;
      Time score = 0;
      switch (rule) {
        case DispatchRule::Random: score = 0; break;
        case DispatchRule::MostWorkRemaining: score = work[i]; break;
        case DispatchRule::MostOperationsRemaining: score = inst.op_count(i) - next[i]; break;
      }
      if (score > best) {
        best = score;
        tied.assign(1, i);
      } else if (score == best) {
        tied.push_back(i);
      }
    }
    const int job = tied.size() == 1 ? tied.front() : tied[uniform_index(rng, tied.size())];
    const int flat = inst.flat_index(job, next[job]++);
    work[job] -= inst.proc_time(flat, mav[flat]);
    osv.push_back(job);
  }
  return osv;
}

std::vector<Chromosome> init_population(const Instance& inst, int size, const InitMix& mix, Rng& rng) {
  const auto plan = plan_initialization(size, mix, rng);
  std::vector<Chromosome> population;
  population.reserve(size);
  for (const auto& p : plan) {
    Chromosome c;
    c.fav = assign_factories(inst, rng);
    c.mav = assign_machines(inst, c.fav, p.assignment == AssignmentRule::PermutedGlobalMinimum, rng);
    c.osv = dispatch_sequence(inst, c.mav, p.dispatch, rng);
    population.push_back(std::move(c));
  }
  return population;
}

}  // namespace coevo
