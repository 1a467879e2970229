// Serial reference vs OpenMP replicate loop for the frontier bootstrap.

#include <benchmark/benchmark.h>

#include "qbf/bounds_global.hpp"
#include "qbf/inference.hpp"
#include "qbf/synthetic.hpp"

namespace {

struct Workload {
  qbf::Sample sample;
  qbf::PolicySpec policy;
  std::vector<double> taus;
  qbf::BootstrapConfig cfg;
};

Workload make_workload(std::size_t n, int threads) {
  qbf::DgpSpec spec;
  spec.n = n;
  spec.seed = 5;
  Workload w{qbf::generate_dgp(spec), {}, qbf::default_tau_grid(0.1), {}};
  w.cfg.replications = 100;
  w.cfg.seed = 17;
  w.cfg.threads = threads;
  return w;
}

void BM_FrontierDrawsSerial(benchmark::State& state) {
  const auto w = make_workload(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    auto d = qbf::frontier_draws_serial(w.sample, w.policy, 0.1, qbf::Side::LowerConclusion, w.taus, w.cfg);
    benchmark::DoNotOptimize(d.rows.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.cfg.replications));
}

void BM_FrontierDrawsParallel(benchmark::State& state) {
  const auto w = make_workload(static_cast<std::size_t>(state.range(0)), 0);
  for (auto _ : state) {
    auto d = qbf::frontier_draws(w.sample, w.policy, 0.1, qbf::Side::LowerConclusion, w.taus, w.cfg);
    benchmark::DoNotOptimize(d.rows.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.cfg.replications));
}

}  // namespace

BENCHMARK(BM_FrontierDrawsSerial)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FrontierDrawsParallel)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
