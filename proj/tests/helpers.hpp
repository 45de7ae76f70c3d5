#pragma once

#include <string>

#include "coevo/genetics.hpp"
#include "coevo/instance.hpp"
#include "coevo/rng.hpp"

namespace testing {

inline std::string data_path(const std::string& file) { return std::string(TEST_DATA_DIR) + "/" + file; }

/// Random FJSP instance; each operation gets 1..max_alts distinct machines.
inline coevo::Instance random_instance(coevo::Rng& rng, int jobs, int max_ops, int machines, int max_alts,
                                       coevo::Time max_time = 20) {
  std::vector<coevo::JobData> data(static_cast<std::size_t>(jobs));
  for (auto& job : data) {
    const int n_ops = 1 + static_cast<int>(coevo::uniform_index(rng, static_cast<std::size_t>(max_ops)));
    for (int j = 0; j < n_ops; ++j) {
      std::vector<int> ms(static_cast<std::size_t>(machines));
      for (int m = 0; m < machines; ++m) ms[static_cast<std::size_t>(m)] = m;
      coevo::shuffle_range(ms.begin(), ms.end(), rng);
      const int k = 1 + static_cast<int>(coevo::uniform_index(rng, static_cast<std::size_t>(std::min(max_alts, machines))));
      coevo::OperationData op;
      for (int a = 0; a < k; ++a) {
        op.push_back({ms[static_cast<std::size_t>(a)],
                      1 + static_cast<coevo::Time>(coevo::uniform_index(rng, static_cast<std::size_t>(max_time)))});
      }
      job.push_back(std::move(op));
    }
  }
  return coevo::Instance(machines, std::move(data));
}

/// Uniformly random chromosome: shuffled OSV, random eligible machines, random factories.
inline coevo::Chromosome random_chromosome(const coevo::Instance& inst, coevo::Rng& rng) {
  coevo::Chromosome c;
  for (int i = 0; i < inst.job_count(); ++i) {
    for (int j = 0; j < inst.op_count(i); ++j) c.osv.push_back(i);
  }
  coevo::shuffle_range(c.osv.begin(), c.osv.end(), rng);
  for (int f = 0; f < inst.total_ops(); ++f) {
    const auto alts = inst.eligible(f);
    c.mav.push_back(alts[coevo::uniform_index(rng, alts.size())].machine);
  }
  if (inst.distributed()) {
    for (int i = 0; i < inst.job_count(); ++i) {
      c.fav.push_back(static_cast<int>(coevo::uniform_index(rng, static_cast<std::size_t>(inst.factory_count()))));
    }
  }
  return c;
}

}  // namespace testing
