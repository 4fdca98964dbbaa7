#ifndef VRGAMES_BENCHMARK_HPP
#define VRGAMES_BENCHMARK_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "vrgames/solvers.hpp"

namespace vrgames {

enum class BenchMethod { VR, MirrorProx, SMD };

const char* bench_method_name(BenchMethod m);
std::optional<BenchMethod> bench_method_from_name(const std::string& name);

struct BenchInstance {
  std::string id;
  const SparseMatrix* matrix = nullptr;
  SetupDescriptor setup;
};

/// Gap of one (instance, method, seed) cell at one work budget: the latest
/// trace sample whose algorithmic work does not exceed the budget.
struct BenchSample {
  std::string instance_id;
  std::string method;
  std::uint64_t seed = 0;
  std::int64_t budget = 0;
  std::int64_t work = 0;  // work at the sampled trace point
  double gap = std::numeric_limits<double>::quiet_NaN();
};

struct BenchSummaryRow {
  std::string instance_id;
  std::string method;
  std::int64_t budget = 0;
  double median_gap = std::numeric_limits<double>::quiet_NaN();
};

struct BenchmarkResult {
  std::vector<BenchSample> samples;           // one row per budget sample
  std::vector<BenchSummaryRow> summary;       // per-budget medians over seeds
  std::vector<std::string> notices;           // skipped method/setup pairs etc.
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<std::string, std::uint64_t>> instance_checksums;
};

struct BenchmarkOptions {
  double epsilon = 1e-2;
  long gap_check_every = 1;
  long smd_gap_check_every = 1000;  // SMD steps are cheap; sample sparser
  long mirror_prox_k_max = 1'000'000;
  long smd_t_max = 50'000'000;
  long max_total_inner_steps = 10'000'000;
};

/// Runs every (instance, method, seed) cell, samples the gap trace at each
/// work budget, and reports per-budget medians. Budgets are canonicalized
/// ascending. Deterministic given the seeds; incompatible method/setup
/// pairs are skipped with a notice.
BenchmarkResult run_benchmark(const std::vector<BenchInstance>& instances,
                              const std::vector<BenchMethod>& methods,
                              std::vector<std::int64_t> budgets,
                              const std::vector<std::uint64_t>& seeds,
                              const BenchmarkOptions& opts = {});

/// CSV schema: instance_id,method,seed,work,gap (header row mandatory,
/// one row per budget sample).
void write_benchmark_csv(std::ostream& out, const BenchmarkResult& result);
void write_benchmark_json(std::ostream& out, const BenchmarkResult& result);

}  // namespace vrgames

#endif  // VRGAMES_BENCHMARK_HPP
