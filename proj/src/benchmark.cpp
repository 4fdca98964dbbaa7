#include "vrgames/benchmark.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

#include "vrgames/baselines.hpp"
#include "vrgames/gap.hpp"

namespace vrgames {

const char* bench_method_name(BenchMethod m) {
  switch (m) {
    case BenchMethod::VR: return "vr";
    case BenchMethod::MirrorProx: return "mirror-prox";
    case BenchMethod::SMD: return "smd";
  }
  return "?";
}

std::optional<BenchMethod> bench_method_from_name(const std::string& name) {
  if (name == "vr") return BenchMethod::VR;
  if (name == "mirror-prox") return BenchMethod::MirrorProx;
  if (name == "smd") return BenchMethod::SMD;
  return std::nullopt;
}

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

BenchmarkResult run_benchmark(const std::vector<BenchInstance>& instances,
                              const std::vector<BenchMethod>& methods,
                              std::vector<std::int64_t> budgets,
                              const std::vector<std::uint64_t>& seeds,
                              const BenchmarkOptions& opts) {
  if (instances.empty() || methods.empty() || budgets.empty() || seeds.empty())
    throw std::invalid_argument("run_benchmark: empty instance/method/budget/seed set");
  std::sort(budgets.begin(), budgets.end());

  BenchmarkResult result;
  result.seeds = seeds;

  for (const BenchInstance& inst : instances) {
    const SparseMatrix& a = *inst.matrix;
    const Point start = uniform_center(inst.setup);
    const double start_gap = duality_gap(inst.setup, a, start);

    for (BenchMethod method : methods) {
      if (method == BenchMethod::SMD && inst.setup.kind != SetupKind::L1L1) {
        result.notices.push_back("skipped smd on " + inst.id + ": setup " +
                                 setup_name(inst.setup.kind) + " not supported");
        continue;
      }
      result.instance_checksums.emplace_back(
          inst.id + "|" + bench_method_name(method), a.checksum());

      // Deterministic methods run once; their single trace serves all seeds.
      std::vector<TraceRecord> deterministic_trace;
      bool have_deterministic = false;

      for (std::uint64_t seed : seeds) {
        std::vector<TraceRecord> trace;
        if (have_deterministic) {
          trace = deterministic_trace;
        } else {
          switch (method) {
            case BenchMethod::VR: {
              SolveOptions so;
              so.seed = seed;
              so.early_stop = true;
              so.gap_check_every = opts.gap_check_every;
              so.max_total_inner_steps = opts.max_total_inner_steps;
              trace = solve(a, inst.setup, opts.epsilon, so).trace;
              break;
            }
            case BenchMethod::MirrorProx: {
              BaselineOptions bo;
              bo.gap_check_every = opts.gap_check_every;
              trace = mirror_prox_baseline(a, inst.setup, opts.epsilon,
                                           opts.mirror_prox_k_max, bo)
                          .trace;
              deterministic_trace = trace;
              have_deterministic = true;
              break;
            }
            case BenchMethod::SMD: {
              BaselineOptions bo;
              bo.gap_check_every = opts.smd_gap_check_every;
              trace = sublinear_smd_baseline(a, inst.setup, opts.epsilon, opts.smd_t_max,
                                             seed, bo)
                          .trace;
              break;
            }
          }
        }

        for (std::int64_t budget : budgets) {
          BenchSample sample;
          sample.instance_id = inst.id;
          sample.method = bench_method_name(method);
          sample.seed = seed;
          sample.budget = budget;
          sample.work = 0;
          sample.gap = start_gap;
          for (const TraceRecord& rec : trace) {
            if (rec.work > budget) break;
            sample.work = rec.work;
            sample.gap = rec.gap;
          }
          result.samples.push_back(std::move(sample));
        }
      }

      for (std::int64_t budget : budgets) {
        std::vector<double> gaps;
        for (const BenchSample& sam : result.samples) {
          if (sam.instance_id == inst.id && sam.method == bench_method_name(method) &&
              sam.budget == budget)
            gaps.push_back(sam.gap);
        }
        result.summary.push_back(
            {inst.id, bench_method_name(method), budget, median_of(std::move(gaps))});
      }
    }
  }
  return result;
}

void write_benchmark_csv(std::ostream& out, const BenchmarkResult& result) {
  out << "instance_id,method,seed,work,gap\n";
  char buf[64];
  for (const BenchSample& s : result.samples) {
    std::snprintf(buf, sizeof buf, "%.17g", s.gap);
    out << s.instance_id << "," << s.method << "," << s.seed << "," << s.work << "," << buf
        << "\n";
  }
}

void write_benchmark_json(std::ostream& out, const BenchmarkResult& result) {
  nlohmann::json j;
  j["seeds"] = result.seeds;
  j["notices"] = result.notices;
  j["checksums"] = nlohmann::json::object();
  for (const auto& [key, sum] : result.instance_checksums)
    j["checksums"][key] = sum;
  j["samples"] = nlohmann::json::array();
  for (const BenchSample& s : result.samples) {
    j["samples"].push_back({{"instance_id", s.instance_id},
                            {"method", s.method},
                            {"seed", s.seed},
                            {"budget", s.budget},
                            {"work", s.work},
                            {"gap", s.gap}});
  }
  j["summary"] = nlohmann::json::array();
  for (const BenchSummaryRow& s : result.summary) {
    j["summary"].push_back({{"instance_id", s.instance_id},
                            {"method", s.method},
                            {"budget", s.budget},
                            {"median_gap", s.median_gap}});
  }
  out << j.dump(2) << "\n";
}

}  // namespace vrgames
