#include <doctest.h>

#include <cmath>

#include "coevo/features.hpp"
#include "helpers.hpp"

using namespace coevo;

namespace {

double erf_cdf(double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); }

}  // namespace

TEST_CASE("job features") {
  const Instance inst(2, {{{{0, 3}, {1, 5}}, {{0, 2}, {1, 4}}}});
  const Chromosome c{{0, 0}, {1, 1}, {}};
  const auto ft = compute_features(decode(c, inst), inst);
  CHECK(ft.jobs[0].min_process_span == 5);
  CHECK(ft.jobs[0].process_span == 9);
  CHECK(ft.jobs[0].op_number == 2);
  CHECK(ft.ops[0].machine_number == 2);
  CHECK(ft.ops[1].earliest_start == 5);
  CHECK(ft.ops[1].proc_time == 4);
  CHECK(ft.ops[0].earliest_start == 0);
}

TEST_CASE("serial chain spans") {
  const Instance inst(1, {{{{0, 3}}, {{0, 2}}}});
  const auto ft = compute_features(decode({{0, 0}, {0, 0}, {}}, inst), inst);
  CHECK(ft.jobs[0].process_span == 5);
  CHECK(ft.jobs[0].min_process_span == 5);
}

TEST_CASE("feature invariants on random schedules") {
  Rng rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = testing::random_instance(rng, 5, 4, 4, 3);
    const auto s = decode(testing::random_chromosome(inst, rng), inst);
    const auto ft = compute_features(s, inst);
    for (const auto& op : ft.ops) {
      CHECK(op.earliest_start <= op.start_time);
      CHECK(op.proc_time > 0);
      CHECK(op.machine_number >= 1);
    }
    for (const auto& job : ft.jobs) CHECK(job.process_span >= job.min_process_span);
  }
}

TEST_CASE("normalize_cdf reference values") {
  const std::vector<double> v = {1, 2, 3};
  const auto out = normalize_cdf(v);
  const double sigma = std::sqrt(2.0 / 3.0);
  CHECK(out[0] == doctest::Approx(erf_cdf(-1 / sigma)).epsilon(1e-9));
  CHECK(out[0] == doctest::Approx(0.1103).epsilon(1e-3));
  CHECK(out[1] == doctest::Approx(0.5));
  CHECK(out[2] == doctest::Approx(0.8897).epsilon(1e-3));

  CHECK(normalize_cdf(std::vector<double>{4, 4, 4}) == std::vector<double>{0.5, 0.5, 0.5});
  CHECK(normalize_cdf(std::vector<double>{7}) == std::vector<double>{0.5});
  CHECK(normalize_cdf(std::vector<double>{}).empty());
}

TEST_CASE("normalize_cdf is monotone and affine invariant") {
  Rng rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(2 + uniform_index(rng, 20));
    for (auto& x : v) x = uniform01(rng) * 200 - 100;
    const auto out = normalize_cdf(v);
    for (std::size_t a = 0; a < v.size(); ++a) {
      for (std::size_t b = 0; b < v.size(); ++b) {
        if (v[a] < v[b]) CHECK(out[a] < out[b]);
      }
    }
    const double scale = 0.1 + uniform01(rng) * 10;
    const double shift = uniform01(rng) * 50 - 25;
    std::vector<double> w;
    for (double x : v) w.push_back(scale * x + shift);
    const auto out2 = normalize_cdf(w);
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(std::abs(out[k] - out2[k]) < 1e-12);
  }
}
