#pragma once

#include <span>
#include <vector>

#include "coevo/schedule.hpp"

namespace coevo {

struct JobFeatures {
  double process_span = 0;      // finish of last op minus start of first op
  double min_process_span = 0;  // sum of the fastest eligible time of each op
  double op_number = 0;
};

struct OpFeatures {
  double start_time = 0;
  double earliest_start = 0;  // finish of the job predecessor, 0 for a first op
  double proc_time = 0;       // time on the assigned machine
  double machine_number = 0;  // number of eligible machines
};

struct FeatureTable {
  std::vector<JobFeatures> jobs;
  std::vector<OpFeatures> ops;  // flat operation order
};

FeatureTable compute_features(const Schedule& sched, const Instance& inst);

/// Standard normal CDF of the population z-scores. A zero spread maps every
/// value to 0.5.
std::vector<double> normalize_cdf(std::span<const double> values);

double standard_normal_cdf(double z);

}  // namespace coevo
