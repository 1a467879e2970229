#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "qbf/error.hpp"
#include "qbf/inference.hpp"
#include "qbf/random.hpp"
#include "qbf/synthetic.hpp"

using namespace qbf;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidConfig;
}

Sample synthetic(std::size_t n, std::uint64_t seed) {
  DgpSpec spec;
  spec.n = n;
  spec.seed = seed;
  return generate_dgp(spec);
}

PolicySpec threshold_policy() {
  PolicySpec p;
  p.kind = PolicyKind::Threshold;
  p.delta = 0.1;
  return p;
}

PolicySpec randomized_policy(std::uint64_t seed) {
  PolicySpec p;
  p.kind = PolicyKind::Randomized;
  p.delta = 0.1;
  p.seed = seed;
  return p;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TEST_CASE("percentile interval uses type-1 quantiles") {
  std::vector<double> draws(100);
  std::iota(draws.begin(), draws.end(), 1.0);
  std::shuffle(draws.begin(), draws.end(), std::mt19937_64(1));
  const auto [lo, hi] = percentile_interval(draws, 0.9);
  CHECK(lo == 5.0);
  CHECK(hi == 95.0);

  const std::vector<double> one = {3.5};
  CHECK(percentile_interval(one, 0.95) == std::pair{3.5, 3.5});

  const std::vector<double> none;
  CHECK(code_of([&] { percentile_interval(none, 0.95); }) == ErrorCode::EmptyInput);
  CHECK(code_of([&] { percentile_interval(one, 1.0); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("percentile interval of normal draws is near 1.96") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> draws(10000);
  for (auto& d : draws) d = normal(rng);
  const auto [lo, hi] = percentile_interval(draws, 0.95);
  CHECK(std::abs(lo + 1.959964) <= 0.08);
  CHECK(std::abs(hi - 1.959964) <= 0.08);
}

TEST_CASE("bootstrap rejects a constant outcome") {
  Sample s(std::vector<double>(20, 1.0), std::vector<std::uint8_t>{1, 0, 1, 0, 1, 0, 1, 0, 1, 0,
                                                                   1, 0, 1, 0, 1, 0, 1, 0, 1, 0},
           std::vector<Covariate>(20, Covariate{0}));
  BootstrapConfig cfg;
  cfg.replications = 2;
  const std::vector<double> taus = {0.5};
  CHECK(code_of([&] { bootstrap_frontier(s, threshold_policy(), 0.1, Side::LowerConclusion, taus, cfg); }) ==
        ErrorCode::DegenerateOutcome);
  CHECK(code_of([&] { bootstrap_marginal_frontier(s, 1.0, taus, cfg); }) == ErrorCode::DegenerateOutcome);
}

TEST_CASE("bootstrap rejects invalid configurations") {
  const auto s = synthetic(300, 1);
  const std::vector<double> taus = {0.5};
  BootstrapConfig cfg;
  cfg.replications = 1;
  CHECK(code_of([&] { bootstrap_frontier(s, threshold_policy(), 0.1, Side::LowerConclusion, taus, cfg); }) ==
        ErrorCode::InvalidConfig);
  cfg.replications = 10;
  cfg.level = 1.5;
  CHECK(code_of([&] { bootstrap_marginal_frontier(s, 1.0, taus, cfg); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("bootstrap bands are deterministic and ordered") {
  const auto s = synthetic(1000, 3);
  const auto taus = default_tau_grid(0.1);
  BootstrapConfig cfg;
  cfg.replications = 50;
  cfg.seed = 99;
  for (const auto& policy : {threshold_policy(), randomized_policy(5)}) {
    const auto a = bootstrap_frontier(s, policy, 0.1, Side::LowerConclusion, taus, cfg);
    const auto b = bootstrap_frontier(s, policy, 0.1, Side::LowerConclusion, taus, cfg);
    CHECK(a.lo == b.lo);
    CHECK(a.hi == b.hi);
    CHECK(a.point == b.point);
    CHECK(a.replications == 50);
    CHECK(a.failed == 0);
    CHECK(a.point == estimate_frontier(s, policy, 0.1, Side::LowerConclusion, taus).c_values);
    for (std::size_t i = 0; i < taus.size(); ++i) CHECK(a.lo[i] <= a.hi[i]);

    BootstrapConfig other = cfg;
    other.seed = 100;
    const auto c = bootstrap_frontier(s, policy, 0.1, Side::LowerConclusion, taus, other);
    CHECK(c.lo != a.lo);
  }
}

TEST_CASE("parallel replicates equal the serial reference exactly") {
  const auto s = synthetic(800, 4);
  const auto taus = default_tau_grid(0.1);
  for (const auto& policy : {threshold_policy(), randomized_policy(6)}) {
    for (bool freeze : {false, true}) {
      BootstrapConfig cfg;
      cfg.replications = 40;
      cfg.seed = 7;
      cfg.freeze_assignment = freeze;
      const auto serial = frontier_draws_serial(s, policy, 0.1, Side::LowerConclusion, taus, cfg);
      for (int threads : {0, 2, 4}) {
        cfg.threads = threads;
        const auto parallel = frontier_draws(s, policy, 0.1, Side::LowerConclusion, taus, cfg);
        CHECK(parallel.rows == serial.rows);
        CHECK(parallel.failed == serial.failed);
      }
    }
  }
}

TEST_CASE("replicate b depends only on the seed and its index") {
  // Rebuild replicate 3 by hand from the documented streams.
  const auto s = synthetic(500, 8);
  const std::vector<double> taus = {0.3, 0.5, 0.7};
  BootstrapConfig cfg;
  cfg.replications = 5;
  cfg.seed = 21;
  const auto policy = randomized_policy(11);
  const auto draws = frontier_draws_serial(s, policy, 0.1, Side::LowerConclusion, taus, cfg);

  auto rng = make_stream(cfg.seed, 3, 0);
  std::uniform_int_distribution<std::size_t> pick(0, s.n() - 1);
  std::vector<std::size_t> rows(s.n());
  for (auto& r : rows) r = pick(rng);
  const Sample resample = s.take(rows);
  PolicySpec redraw = policy;
  redraw.seed = derive_seed(cfg.seed, 3, 1);
  CHECK(draws.rows[3] == estimate_frontier(resample, redraw, 0.1, Side::LowerConclusion, taus).c_values);

  // A longer run shares its leading replicates.
  cfg.replications = 8;
  const auto longer = frontier_draws_serial(s, policy, 0.1, Side::LowerConclusion, taus, cfg);
  for (std::size_t b = 0; b < 5; ++b) CHECK(longer.rows[b] == draws.rows[b]);
}

TEST_CASE("frozen assignment carries the original policy column into each replicate") {
  const auto s = synthetic(500, 9);
  const std::vector<double> taus = {0.3, 0.5};
  BootstrapConfig cfg;
  cfg.replications = 4;
  cfg.seed = 22;
  cfg.freeze_assignment = true;
  const auto policy = randomized_policy(12);
  const auto draws = frontier_draws_serial(s, policy, 0.1, Side::LowerConclusion, taus, cfg);

  const auto original = assign_policy(s, policy);
  auto rng = make_stream(cfg.seed, 2, 0);
  std::uniform_int_distribution<std::size_t> pick(0, s.n() - 1);
  std::vector<std::size_t> rows(s.n());
  for (auto& r : rows) r = pick(rng);
  const Sample resample = s.take(rows);
  PolicyAssignment a;
  a.delta = 0.1;
  for (auto r : rows) a.d_delta.push_back(original.d_delta[r]);
  const auto pair = apparent_pair(resample, a);
  CHECK(draws.rows[2] ==
        breakdown_frontier(pair, outcome_cdf(resample), taus, 0.1, Side::LowerConclusion).c_values);

  cfg.freeze_assignment = false;
  const auto redrawn = frontier_draws_serial(s, policy, 0.1, Side::LowerConclusion, taus, cfg);
  CHECK(redrawn.rows != draws.rows);
}

TEST_CASE("fragile covariate cells make the bootstrap degenerate") {
  // Cell 1 has one treated row and holds the lowest controls, which the
  // threshold policy shifts; resamples that miss that row cannot be matched.
  std::vector<double> y;
  std::vector<std::uint8_t> d;
  std::vector<Covariate> x;
  for (int i = 0; i < 40; ++i) {
    const bool treated = i % 2 == 0;
    y.push_back(treated ? 10.0 + i : (i < 8 ? i * 0.1 : 5.0 + i));
    d.push_back(treated);
    x.push_back({(!treated && i < 8) || i == 0 ? 1 : 0});
  }
  const Sample s(y, d, x);
  BootstrapConfig cfg;
  cfg.replications = 100;
  const std::vector<double> taus = {0.5};
  const auto draws = frontier_draws(s, threshold_policy(), 0.1, Side::LowerConclusion, taus, cfg);
  CHECK(draws.failed > 10);
  for (const auto& row : draws.rows) CHECK((row.empty() || row.size() == 1));
  CHECK(code_of([&] { bootstrap_frontier(s, threshold_policy(), 0.1, Side::LowerConclusion, taus, cfg); }) ==
        ErrorCode::BootstrapDegenerate);
}

TEST_CASE("marginal band straddles zero when treated and control coincide") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> y;
  std::vector<std::uint8_t> d;
  std::vector<Covariate> x;
  for (int i = 0; i < 400; ++i) {
    const double v = normal(rng);
    for (std::uint8_t t : {1, 0}) {
      y.push_back(v);
      d.push_back(t);
      x.push_back({i % 2});
    }
  }
  const Sample s(y, d, x);
  const std::vector<double> taus = {0.25, 0.5, 0.75};
  BootstrapConfig cfg;
  cfg.replications = 200;
  cfg.seed = 3;
  const auto band = bootstrap_marginal_frontier(s, 1.0, taus, cfg);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    CHECK(band.point[i] == 0.0);
    CHECK(band.lo[i] < 0.0);
    CHECK(band.hi[i] > 0.0);
  }
  const auto again = bootstrap_marginal_frontier(s, 1.0, taus, cfg);
  CHECK(again.lo == band.lo);
  CHECK(again.hi == band.hi);
}

TEST_CASE("band width shrinks with the sample size") {
  const auto taus = default_tau_grid(0.1);
  BootstrapConfig cfg;
  cfg.replications = 200;
  cfg.seed = 13;
  auto width = [&](std::size_t n) {
    const auto band =
        bootstrap_frontier(synthetic(n, 14), threshold_policy(), 0.1, Side::LowerConclusion, taus, cfg);
    std::vector<double> w;
    for (std::size_t i = 0; i < taus.size(); ++i) w.push_back(band.hi[i] - band.lo[i]);
    return median(w);
  };
  CHECK(width(8000) < width(2000));
}

TEST_CASE("marginal band covers the population frontier at the nominal rate") {
  const testing::SelectionModel model;
  const std::vector<double> taus = {0.25, 0.5, 0.75};
  std::vector<double> truth;
  for (double t : taus) {
    const double q = model.outcome_quantile(t);
    truth.push_back(model.treated_cdf(q) - model.control_cdf(q));
  }
  const int runs = 200;
  std::vector<int> hits(taus.size(), 0);
  for (int m = 0; m < runs; ++m) {
    const auto s = synthetic(2000, derive_seed(2024, m, 2));
    BootstrapConfig cfg;
    cfg.replications = 200;
    cfg.seed = derive_seed(2024, m, 3);
    const auto band = bootstrap_marginal_frontier(s, 1.0, taus, cfg);
    for (std::size_t i = 0; i < taus.size(); ++i)
      hits[i] += band.lo[i] <= truth[i] && truth[i] <= band.hi[i];
  }
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double coverage = static_cast<double>(hits[i]) / runs;
    INFO("tau=" << taus[i] << " coverage=" << coverage);
    CHECK(coverage >= 0.90);
    CHECK(coverage <= 0.98);
  }
}
