#include "coevo/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coevo {

FeatureTable compute_features(const Schedule& sched, const Instance& inst) {
  FeatureTable table;
  table.jobs.resize(inst.job_count());
  table.ops.resize(inst.total_ops());
  for (int i = 0; i < inst.job_count(); ++i) {
    const int first = inst.flat_index(i, 0);
    const int last = inst.flat_index(i, inst.op_count(i) - 1);
    auto& job = table.jobs[i];
    job.process_span = static_cast<double>(sched.finish[last] - sched.start[first]);
    job.op_number = inst.op_count(i);
    Time min_span = 0;
    for (int k = first; k <= last; ++k) {
      min_span += inst.min_proc_time(k);
      auto& op = table.ops[k];
      op.start_time = static_cast<double>(sched.start[k]);
      op.earliest_start = k == first ? 0.0 : static_cast<double>(sched.finish[k - 1]);
      op.proc_time = static_cast<double>(sched.finish[k] - sched.start[k]);
      op.machine_number = static_cast<double>(inst.eligible(k).size());
    }
    job.min_process_span = static_cast<double>(min_span);
  }
  return table;
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<double> normalize_cdf(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.5);
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sq = 0.0;
  double scale = 0.0;
  for (double v : values) {
    sq += (v - mean) * (v - mean);
    scale = std::max(scale, std::abs(v));
  }
  const double sigma = std::sqrt(sq / n);
  // Spread below rounding noise counts as zero spread.
  if (!(sigma > 1e-12 * std::max(1.0, scale))) return out;
  for (std::size_t k = 0; k < values.size(); ++k) out[k] = standard_normal_cdf((values[k] - mean) / sigma);
  return out;
}

}  // namespace coevo
