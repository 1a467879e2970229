#include "qbf/inference.hpp"

#include <omp.h>

#include <algorithm>
#include <functional>
#include <sstream>

#include "qbf/error.hpp"
#include "qbf/random.hpp"

namespace qbf {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
  auto rng = make_stream(seed, stream, substream);
  return rng();
}

void require_nondegenerate_outcome(const Sample& sample) {
  if (sample.n() == 0) throw Error(ErrorCode::EmptyInput, "sample has no rows");
  auto [lo, hi] = std::minmax_element(sample.y().begin(), sample.y().end());
  if (*lo == *hi) throw Error(ErrorCode::DegenerateOutcome, "all outcome values are equal");
}

FrontierCurve estimate_frontier(const Sample& sample, const PolicySpec& policy, double g, Side side,
                                std::span<const double> taus) {
  const auto assignment = assign_policy(sample, policy);
  const auto pair = apparent_pair(sample, assignment);
  return breakdown_frontier(pair, outcome_cdf(sample), taus, g, side);
}

std::pair<double, double> percentile_interval(std::span<const double> draws, double level) {
  if (draws.empty()) throw Error(ErrorCode::EmptyInput, "no bootstrap draws");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidConfig, "level must lie in (0, 1)");
  const StepCdf f = ecdf_from_values(draws, 1.0);
  const double tail = (1.0 - level) / 2.0;
  // Tails below 1/n clip to the extreme draws instead of returning sentinels.
  const auto support = f.support();
  auto pick = [&](double t) {
    const ExtendedReal q = f.quantile(t);
    if (q.is_neg_inf()) return support.front();
    if (q.is_pos_inf()) return support.back();
    return q.value();
  };
  return {pick(tail), pick(1.0 - tail)};
}

namespace {

using Statistic =
    std::function<std::vector<double>(std::span<const std::size_t> rows, std::size_t b)>;

std::vector<std::size_t> resample_rows(std::size_t n, std::uint64_t seed, std::size_t b) {
  auto rng = make_stream(seed, b, 0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = pick(rng);
  return rows;
}

void run_one(const Sample& sample, const Statistic& stat, const BootstrapConfig& cfg,
             std::size_t b, std::vector<double>& out, char& failed) {
  try {
    const auto rows = resample_rows(sample.n(), cfg.seed, b);
    out = stat(rows, b);
    failed = 0;
  } catch (const Error&) {
    out.clear();
    failed = 1;
  }
}

ReplicateDraws collect(std::vector<std::vector<double>> rows, const std::vector<char>& failed) {
  ReplicateDraws draws;
  draws.rows = std::move(rows);
  draws.failed = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  return draws;
}

ReplicateDraws draws_serial(const Sample& sample, const Statistic& stat, const BootstrapConfig& cfg) {
  std::vector<std::vector<double>> rows(cfg.replications);
  std::vector<char> failed(cfg.replications, 0);
  for (std::size_t b = 0; b < cfg.replications; ++b) run_one(sample, stat, cfg, b, rows[b], failed[b]);
  return collect(std::move(rows), failed);
}

ReplicateDraws draws_parallel(const Sample& sample, const Statistic& stat, const BootstrapConfig& cfg) {
  if (cfg.threads == 1) return draws_serial(sample, stat, cfg);
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
  std::vector<std::vector<double>> rows(cfg.replications);
  std::vector<char> failed(cfg.replications, 0);
  const auto count = static_cast<std::int64_t>(cfg.replications);
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (std::int64_t b = 0; b < count; ++b) {
    const auto idx = static_cast<std::size_t>(b);
    run_one(sample, stat, cfg, idx, rows[idx], failed[idx]);
  }
  return collect(std::move(rows), failed);
}

void check_config(const BootstrapConfig& cfg) {
  if (cfg.replications < 2) throw Error(ErrorCode::InvalidConfig, "at least two replications are required");
  if (!(cfg.level > 0.0 && cfg.level < 1.0))
    throw Error(ErrorCode::InvalidConfig, "confidence level must lie in (0, 1)");
}

BandCurve summarize(std::span<const double> taus, std::vector<double> point,
                    const ReplicateDraws& draws, const BootstrapConfig& cfg) {
  const std::size_t ok = cfg.replications - draws.failed;
  if (draws.failed * 10 > cfg.replications || ok == 0) {
    std::ostringstream os;
    os << draws.failed << " of " << cfg.replications << " bootstrap replicates failed";
    throw Error(ErrorCode::BootstrapDegenerate, os.str());
  }
  BandCurve band;
  band.taus.assign(taus.begin(), taus.end());
  band.point = std::move(point);
  band.replications = cfg.replications;
  band.failed = draws.failed;
  std::vector<double> column;
  column.reserve(ok);
  for (std::size_t j = 0; j < taus.size(); ++j) {
    column.clear();
    for (const auto& row : draws.rows)
      if (!row.empty()) column.push_back(row[j]);
    const auto [lo, hi] = percentile_interval(column, cfg.level);
    band.lo.push_back(lo);
    band.hi.push_back(hi);
  }
  return band;
}

Statistic frontier_statistic(const Sample& sample, const PolicySpec& policy, double g, Side side,
                             std::span<const double> taus, const BootstrapConfig& cfg) {
  std::vector<double> grid(taus.begin(), taus.end());
  if (cfg.freeze_assignment) {
    auto original = std::make_shared<PolicyAssignment>(assign_policy(sample, policy));
    return [=, &sample](std::span<const std::size_t> rows, std::size_t) {
      const Sample resample = sample.take(rows);
      PolicyAssignment a;
      a.delta = original->delta;
      a.d_delta.reserve(rows.size());
      for (auto r : rows) a.d_delta.push_back(original->d_delta[r]);
      const auto pair = apparent_pair(resample, a);
      return breakdown_frontier(pair, outcome_cdf(resample), grid, g, side).c_values;
    };
  }
  return [=, &sample](std::span<const std::size_t> rows, std::size_t b) {
    const Sample resample = sample.take(rows);
    PolicySpec replicate_policy = policy;
    replicate_policy.seed = derive_seed(cfg.seed, b, 1);
    return estimate_frontier(resample, replicate_policy, g, side, grid).c_values;
  };
}

}  // namespace

ReplicateDraws frontier_draws(const Sample& sample, const PolicySpec& policy, double g, Side side,
                              std::span<const double> taus, const BootstrapConfig& cfg) {
  check_config(cfg);
  return draws_parallel(sample, frontier_statistic(sample, policy, g, side, taus, cfg), cfg);
}

ReplicateDraws frontier_draws_serial(const Sample& sample, const PolicySpec& policy, double g,
                                     Side side, std::span<const double> taus,
                                     const BootstrapConfig& cfg) {
  check_config(cfg);
  return draws_serial(sample, frontier_statistic(sample, policy, g, side, taus, cfg), cfg);
}

BandCurve bootstrap_frontier(const Sample& sample, const PolicySpec& policy, double g, Side side,
                             std::span<const double> taus, const BootstrapConfig& cfg) {
  check_config(cfg);
  require_nondegenerate_outcome(sample);
  require_valid(sample);
  auto point = estimate_frontier(sample, policy, g, side, taus).c_values;
  const auto draws = frontier_draws(sample, policy, g, side, taus, cfg);
  return summarize(taus, std::move(point), draws, cfg);
}

BandCurve bootstrap_marginal_frontier(const Sample& sample, double alpha,
                                      std::span<const double> taus, const BootstrapConfig& cfg) {
  check_config(cfg);
  require_nondegenerate_outcome(sample);
  require_valid(sample);
  std::vector<double> grid(taus.begin(), taus.end());
  auto point = marginal_frontier(sample, indifference_pmf(sample, alpha), grid).c_values;
  Statistic stat = [alpha, grid, &sample](std::span<const std::size_t> rows, std::size_t) {
    const Sample resample = sample.take(rows);
    return marginal_frontier(resample, indifference_pmf(resample, alpha), grid).c_values;
  };
  const auto draws = draws_parallel(sample, stat, cfg);
  return summarize(taus, std::move(point), draws, cfg);
}

}  // namespace qbf
