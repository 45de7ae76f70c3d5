#include "coevo/schedule.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "coevo/error.hpp"

namespace coevo {

void check_chromosome(const Chromosome& chrom, const Instance& inst) {
  const auto n = static_cast<std::size_t>(inst.total_ops());
  if (chrom.osv.size() != n || chrom.mav.size() != n) {
    throw Error(ErrorCode::InfeasibleChromosome, "vector length does not match operation count");
  }
  std::vector<int> counts(inst.job_count(), 0);
  for (int job : chrom.osv) {
    if (job < 0 || job >= inst.job_count()) {
      throw Error(ErrorCode::InfeasibleChromosome, "job id out of range in OSV");
    }
    ++counts[job];
  }
  for (int i = 0; i < inst.job_count(); ++i) {
    if (counts[i] != inst.op_count(i)) {
      throw Error(ErrorCode::InfeasibleChromosome, "OSV occurrence count mismatch for job " + std::to_string(i));
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (inst.proc_time(static_cast<int>(k), chrom.mav[k]) <= 0) {
      throw Error(ErrorCode::InfeasibleChromosome,
                  "machine " + std::to_string(chrom.mav[k]) + " not eligible for operation " + std::to_string(k));
    }
  }
  if (inst.distributed()) {
    if (chrom.fav.size() != static_cast<std::size_t>(inst.job_count())) {
      throw Error(ErrorCode::InfeasibleChromosome, "factory vector length does not match job count");
    }
    for (int f : chrom.fav) {
      if (f < 0 || f >= inst.factory_count()) {
        throw Error(ErrorCode::InfeasibleChromosome, "factory id out of range");
      }
    }
  } else if (!chrom.fav.empty()) {
    throw Error(ErrorCode::InfeasibleChromosome, "factory vector on a single-factory instance");
  }
}

namespace {

struct Interval {
  Time start;
  Time finish;
};

}  // namespace

Schedule decode(const Chromosome& chrom, const Instance& inst) {
  check_chromosome(chrom, inst);
  const int n = inst.total_ops();
  const int machines = inst.machine_count();

  Schedule s;
  s.start.assign(n, 0);
  s.finish.assign(n, 0);
  s.machine.assign(n, 0);
  s.factory.assign(n, 0);

  std::vector<std::vector<Interval>> busy(static_cast<std::size_t>(inst.factory_count()) * machines);
  std::vector<int> next_op(inst.job_count(), 0);
  std::vector<Time> job_ready(inst.job_count(), 0);

  for (int job : chrom.osv) {
    const int flat = inst.flat_index(job, next_op[job]++);
    const int machine = chrom.mav[flat];
    const int factory = inst.distributed() ? chrom.fav[job] : 0;
    const Time duration = inst.proc_time(flat, machine);
    auto& timeline = busy[static_cast<std::size_t>(factory) * machines + machine];

    // Earliest gap that fits; otherwise append after the last busy interval.
    Time begin = job_ready[job];
    std::size_t insert_at = timeline.size();
    Time prev_end = 0;
    for (std::size_t g = 0; g < timeline.size(); ++g) {
      const Time candidate = std::max(job_ready[job], prev_end);
      if (candidate + duration <= timeline[g].start) {
        begin = candidate;
        insert_at = g;
        break;
      }
      prev_end = timeline[g].finish;
    }
    if (insert_at == timeline.size()) begin = std::max(job_ready[job], prev_end);
    timeline.insert(timeline.begin() + static_cast<std::ptrdiff_t>(insert_at), {begin, begin + duration});

    s.start[flat] = begin;
    s.finish[flat] = begin + duration;
    s.machine[flat] = machine;
    s.factory[flat] = factory;
    job_ready[job] = begin + duration;
    s.makespan = std::max(s.makespan, begin + duration);
  }
  return s;
}

Time makespan(const Chromosome& chrom, const Instance& inst) { return decode(chrom, inst).makespan; }

std::vector<int> critical_path(const Schedule& sched, const Instance& inst) {
  const int n = inst.total_ops();
  if (n == 0) return {};

  // Operations grouped per (factory, machine) resource, ordered by start time.
  const int machines = inst.machine_count();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto ra = sched.factory[a] * machines + sched.machine[a];
    const auto rb = sched.factory[b] * machines + sched.machine[b];
    if (ra != rb) return ra < rb;
    if (sched.start[a] != sched.start[b]) return sched.start[a] < sched.start[b];
    return a < b;
  });
  std::vector<int> machine_pred(n, -1);
  for (int k = 1; k < n; ++k) {
    const int a = order[k - 1];
    const int b = order[k];
    if (sched.factory[a] == sched.factory[b] && sched.machine[a] == sched.machine[b]) machine_pred[b] = a;
  }

  int current = -1;
  for (int k = 0; k < n; ++k) {
    if (sched.finish[k] == sched.makespan) {
      current = k;
      break;
    }
  }

  std::vector<int> path;
  while (current >= 0) {
    path.push_back(current);
    const Time begin = sched.start[current];
    const int mp = machine_pred[current];
    const auto ref = inst.op_ref(current);
    const int jp = ref.op > 0 ? current - 1 : -1;
    if (mp >= 0 && sched.finish[mp] == begin) {
      current = mp;
    } else if (jp >= 0 && sched.finish[jp] == begin) {
      current = jp;
    } else {
      current = -1;
    }
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool check_feasible(const Schedule& sched, const Instance& inst) {
  const auto n = static_cast<std::size_t>(inst.total_ops());
  if (sched.start.size() != n || sched.finish.size() != n || sched.machine.size() != n ||
      sched.factory.size() != n) {
    return false;
  }
  Time latest = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const int flat = static_cast<int>(k);
    const Time duration = inst.proc_time(flat, sched.machine[k]);
    if (duration <= 0) return false;
    if (sched.start[k] < 0 || sched.finish[k] != sched.start[k] + duration) return false;
    if (sched.factory[k] < 0 || sched.factory[k] >= inst.factory_count()) return false;
    const auto ref = inst.op_ref(flat);
    if (ref.op > 0) {
      if (sched.start[k] < sched.finish[k - 1]) return false;
      if (sched.factory[k] != sched.factory[k - 1]) return false;
    }
    latest = std::max(latest, sched.finish[k]);
  }
  if (latest != sched.makespan) return false;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (sched.factory[a] != sched.factory[b]) return sched.factory[a] < sched.factory[b];
    if (sched.machine[a] != sched.machine[b]) return sched.machine[a] < sched.machine[b];
    return sched.start[a] < sched.start[b];
  });
  for (std::size_t k = 1; k < n; ++k) {
    const int a = order[k - 1];
    const int b = order[k];
    if (sched.factory[a] == sched.factory[b] && sched.machine[a] == sched.machine[b] &&
        sched.start[b] < sched.finish[a]) {
      return false;
    }
  }
  return true;
}

std::string schedule_to_json(const Schedule& sched, const Instance& inst) {
  nlohmann::ordered_json ops = nlohmann::ordered_json::array();
  for (int k = 0; k < inst.total_ops(); ++k) {
    const auto ref = inst.op_ref(k);
    ops.push_back({{"job", ref.job},
                   {"op", ref.op},
                   {"machine", sched.machine[k]},
                   {"factory", sched.factory[k]},
                   {"start", sched.start[k]},
                   {"finish", sched.finish[k]}});
  }
  nlohmann::ordered_json doc = {{"makespan", sched.makespan}, {"ops", ops}};
  return doc.dump(2) + "\n";
}

}  // namespace coevo
