#include "qbf/synthetic.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qbf/error.hpp"
#include "qbf/inference.hpp"
#include "qbf/random.hpp"

namespace qbf {

Sample generate_dgp(const DgpSpec& spec) {
  if (spec.n < 10) throw Error(ErrorCode::InvalidConfig, "synthetic samples need n >= 10");
  if (!(spec.rho_sel > -1.0 && spec.rho_sel < 1.0))
    throw Error(ErrorCode::InvalidConfig, "rho_sel must lie in (-1, 1)");
  if (spec.x_probs.empty() ||
      std::any_of(spec.x_probs.begin(), spec.x_probs.end(), [](double p) { return !(p >= 0.0); }) ||
      std::abs(compensated_sum(spec.x_probs) - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidConfig, "x_probs must be nonnegative and sum to 1");

  auto rng = make_stream(spec.seed, 0x5eed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::discrete_distribution<std::uint32_t> covariate(spec.x_probs.begin(), spec.x_probs.end());
  const double noise = std::sqrt(1.0 - spec.rho_sel * spec.rho_sel);

  std::vector<double> y(spec.n);
  std::vector<std::uint8_t> d(spec.n);
  std::vector<std::uint32_t> cells(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double v = normal(rng);
    const std::uint32_t x = covariate(rng);
    const double u0 = spec.rho_sel * v + noise * normal(rng);
    const double u1 = spec.rho_sel * v + noise * normal(rng);
    const bool treated = v >= 0.0;
    const double base = spec.x_shift * static_cast<double>(x);
    y[i] = treated ? base + spec.effect + u1 : base + u0;
    d[i] = treated ? 1 : 0;
    cells[i] = x;
  }
  auto levels = std::make_shared<std::vector<Covariate>>();
  for (std::size_t k = 0; k < spec.x_probs.size(); ++k)
    levels->push_back({static_cast<std::int64_t>(k)});
  return Sample::from_cells(std::move(y), std::move(d), std::move(cells), std::move(levels));
}

namespace {

struct PointValues {
  double frontier_lower, frontier_upper, apparent_level, bound_lower, bound_upper, point_effect,
      derived_lower;
};

std::vector<PointValues> evaluate(const Sample& sample, const PolicySpec& policy,
                                  std::span<const OracleQuery> queries) {
  const auto assignment = assign_policy(sample, policy);
  const auto pair = apparent_pair(sample, assignment);
  const auto f_y = outcome_cdf(sample);
  std::vector<PointValues> out;
  for (const auto& q : queries) {
    const double tau[] = {q.tau};
    const auto lower = breakdown_frontier(pair, f_y, tau, q.g, Side::LowerConclusion);
    const auto bounds = global_effect_bounds(pair, f_y, q.tau, q.c);
    const auto point = global_effect_bounds(pair, f_y, q.tau, 0.0);
    const auto derived = derived_bounds(pair, f_y, q.tau, q.g, tau);
    const double quantile_y = f_y.quantile(q.tau).value();
    out.push_back({lower.c_values[0], -lower.c_values[0], pair.f_a.eval(quantile_y + q.g),
                   bounds.lower.value(), bounds.upper.value(), point.lower.value(),
                   derived.curve.lower[0].value()});
  }
  return out;
}

OracleValue with_se(double value, const std::vector<double>& halves) {
  const double k = static_cast<double>(halves.size());
  double mean = 0.0;
  for (double h : halves) mean += h;
  mean /= k;
  double ss = 0.0;
  for (double h : halves) ss += (h - mean) * (h - mean);
  const double sd_half = std::sqrt(ss / (k - 1.0));
  return {value, sd_half / std::sqrt(2.0)};
}

}  // namespace

OracleReport oracle_population_quantities(const DgpSpec& spec, const PolicySpec& policy,
                                          std::span<const OracleQuery> queries,
                                          std::size_t oracle_n, std::uint64_t seed, int threads) {
  if (oracle_n < 100'000) throw Error(ErrorCode::InvalidConfig, "oracle_n must be at least 1e5");

  // Slot 0 is the full sample; slots 1..10 are the independent half samples.
  const std::size_t slots = 1 + kOracleHalfSamples;
  std::vector<std::vector<PointValues>> results(slots);
  std::vector<std::string> errors(slots);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(slots); ++s) {
    DgpSpec draw = spec;
    draw.n = s == 0 ? oracle_n : oracle_n / 2;
    draw.seed = derive_seed(seed, static_cast<std::uint64_t>(s), 7);
    try {
      results[static_cast<std::size_t>(s)] = evaluate(generate_dgp(draw), policy, queries);
    } catch (const Error& e) {
      errors[static_cast<std::size_t>(s)] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw Error(ErrorCode::InvalidConfig, "oracle evaluation failed: " + e);

  OracleReport report;
  report.oracle_n = oracle_n;
  report.half_samples = kOracleHalfSamples;
  for (std::size_t j = 0; j < queries.size(); ++j) {
    auto field = [&](double PointValues::*member) {
      std::vector<double> halves;
      for (std::size_t s = 1; s < slots; ++s) halves.push_back(results[s][j].*member);
      return with_se(results[0][j].*member, halves);
    };
    OracleEntry e;
    e.query = queries[j];
    e.frontier_lower = field(&PointValues::frontier_lower);
    e.frontier_upper = field(&PointValues::frontier_upper);
    e.apparent_level = field(&PointValues::apparent_level);
    e.bound_lower = field(&PointValues::bound_lower);
    e.bound_upper = field(&PointValues::bound_upper);
    e.point_effect = field(&PointValues::point_effect);
    e.derived_lower = field(&PointValues::derived_lower);
    report.entries.push_back(e);
  }
  return report;
}

CoverageTable coverage_study(const DgpSpec& spec, const PolicySpec& policy, double g,
                             std::span<const double> taus, const CoverageConfig& cfg) {
  if (cfg.runs < 2) throw Error(ErrorCode::InvalidConfig, "coverage needs at least two runs");

  std::vector<OracleQuery> queries;
  for (double tau : taus) queries.push_back({tau, g, 0.0});
  const auto oracle = oracle_population_quantities(spec, policy, queries, cfg.oracle_n,
                                                   derive_seed(cfg.seed, 0, 11), cfg.threads);

  const std::size_t k = taus.size();
  std::vector<std::vector<double>> lo(cfg.runs), hi(cfg.runs);
  std::vector<char> failed(cfg.runs, 0);
  const int nt = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (std::int64_t m = 0; m < static_cast<std::int64_t>(cfg.runs); ++m) {
    const auto run = static_cast<std::size_t>(m);
    DgpSpec data = spec;
    data.n = cfg.n_data;
    data.seed = derive_seed(cfg.seed, run + 1, 2);
    PolicySpec run_policy = policy;
    run_policy.seed = derive_seed(cfg.seed, run + 1, 4);
    BootstrapConfig boot;
    boot.replications = cfg.replications;
    boot.level = cfg.level;
    boot.seed = derive_seed(cfg.seed, run + 1, 3);
    boot.threads = 1;
    try {
      const auto band = bootstrap_frontier(generate_dgp(data), run_policy, g, Side::LowerConclusion,
                                           taus, boot);
      lo[run] = band.lo;
      hi[run] = band.hi;
    } catch (const Error&) {
      failed[run] = 1;
    }
  }

  CoverageTable table;
  table.taus.assign(taus.begin(), taus.end());
  table.runs = cfg.runs;
  table.replications = cfg.replications;
  table.n_data = cfg.n_data;
  table.low_run_count = cfg.runs < 50;
  table.failed_runs = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  const std::size_t ok = cfg.runs - table.failed_runs;
  if (ok == 0) throw Error(ErrorCode::BootstrapDegenerate, "every coverage run failed");
  for (std::size_t j = 0; j < k; ++j) {
    const double truth = oracle.entries[j].frontier_lower.value;
    std::size_t covered = 0;
    std::vector<double> widths;
    for (std::size_t m = 0; m < cfg.runs; ++m) {
      if (failed[m]) continue;
      if (lo[m][j] <= truth && truth <= hi[m][j]) ++covered;
      widths.push_back(hi[m][j] - lo[m][j]);
    }
    const double cov = static_cast<double>(covered) / static_cast<double>(ok);
    std::nth_element(widths.begin(), widths.begin() + widths.size() / 2, widths.end());
    table.oracle_c.push_back(truth);
    table.oracle_mc_se.push_back(oracle.entries[j].frontier_lower.mc_se);
    table.coverage.push_back(cov);
    table.mc_se.push_back(std::sqrt(cov * (1.0 - cov) / static_cast<double>(ok)));
    table.median_width.push_back(widths[widths.size() / 2]);
  }
  return table;
}

}  // namespace qbf
