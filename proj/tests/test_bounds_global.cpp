#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qbf/bounds_global.hpp"
#include "qbf/error.hpp"
#include "qbf/synthetic.hpp"

using namespace qbf;

namespace {

struct Instance {
  Sample sample;
  PolicyAssignment assignment;
};

/// Random small sample with a threshold or randomized policy that shifts at
/// least one control row.
Instance random_instance(std::mt19937_64& rng, const testing::SmallSampleOptions& opt = {}) {
  for (;;) {
    auto s = testing::random_small_sample(rng, opt);
    const double p = s.treated_share();
    const double hi = std::min(0.25, 0.9 * (1.0 - p));
    if (hi <= 0.05) continue;
    const double delta = std::uniform_real_distribution<double>(0.05, hi)(rng);
    const bool threshold = std::bernoulli_distribution(0.5)(rng);
    auto a = threshold ? assign_threshold_policy(s, delta, s.y())
                       : assign_randomized_policy(s, delta, rng());
    if (a.newly_treated_count(s) == 0) continue;
    // Ties at the threshold can shift every control, leaving F_{Y|D_delta=0} undefined.
    if (std::count(a.d_delta.begin(), a.d_delta.end(), 0) == 0) continue;
    return {std::move(s), std::move(a)};
  }
}

std::vector<double> probe_points(const Sample& s) {
  std::vector<double> pts(s.y().begin(), s.y().end());
  for (double y : s.y()) {
    pts.push_back(y - 0.01);
    pts.push_back(y + 0.01);
  }
  pts.push_back(-1e9);
  pts.push_back(1e9);
  return pts;
}

/// 10 rows where the only newly treated row is matched to the lowest outcome.
Instance slack_fixture() {
  Sample s({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {1, 1, 1, 1, 1, 0, 0, 0, 0, 0},
           {{1}, {0}, {0}, {0}, {0}, {1}, {0}, {0}, {0}, {0}});
  auto a = assign_threshold_policy(s, 0.1, s.y());
  return {std::move(s), std::move(a)};
}

}  // namespace

TEST_CASE("apparent_pair rejects assignments that shift nobody") {
  Sample s({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {1, 1, 1, 1, 1, 0, 0, 0, 0, 0},
           std::vector<Covariate>(10, Covariate{0}));
  PolicyAssignment a;
  a.d_delta.assign(s.d().begin(), s.d().end());
  a.delta = 0.1;
  a.realized_rate = 0.5;
  try {
    apparent_pair(s, a);
    FAIL("expected NO_NEWLY_TREATED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoNewlyTreated);
  }
}

TEST_CASE("apparent_pair rejects newly treated cells with no treated rows") {
  Sample s({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {1, 1, 1, 1, 1, 0, 0, 0, 0, 0},
           {{0}, {0}, {0}, {0}, {0}, {1}, {0}, {0}, {0}, {0}});
  const auto a = assign_threshold_policy(s, 0.1, s.y());
  REQUIRE(a.d_delta[5] == 1);
  try {
    apparent_pair(s, a);
    FAIL("expected EMPTY_CELL");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyCell);
  }
}

TEST_CASE("single covariate value collapses the matched proxy to the treated cdf") {
  std::mt19937_64 rng(11);
  testing::SmallSampleOptions opt;
  opt.levels = 1;
  for (int rep = 0; rep < 50; ++rep) {
    const auto inst = random_instance(rng, opt);
    const auto pair = apparent_pair(inst.sample, inst.assignment);
    const auto f1 = conditional_ecdf(inst.sample, nullptr, RowPredicate::treated());
    const auto fu = conditional_ecdf(inst.sample, &inst.assignment, RowPredicate::policy_untreated());
    const double p = pair.p_hat, d = pair.delta;
    for (double y : probe_points(inst.sample)) {
      const double expected = p * f1(y) + (1.0 - p - d) * fu(y) + d * f1(y);
      CHECK(std::abs(pair.f_a(y) - expected) <= 1e-14);
    }
  }
}

TEST_CASE("apparent_pair matches the from-scratch double-loop computation") {
  std::mt19937_64 rng(12);
  testing::SmallSampleOptions opt;
  opt.n_min = opt.n_max = 60;
  for (int rep = 0; rep < 60; ++rep) {
    const auto inst = random_instance(rng, opt);
    const auto pair = apparent_pair(inst.sample, inst.assignment);
    const testing::CountingApparent oracle{inst.sample, inst.assignment.d_delta, inst.assignment.delta};
    for (double y : probe_points(inst.sample)) {
      CHECK(std::abs(pair.f_a(y) - oracle.apparent(y)) <= 1e-14);
      CHECK(std::abs(pair.f_a_tilde(y) - oracle.incomplete(y)) <= 1e-14);
    }
    CHECK(std::abs(pair.f_a.total_mass() - 1.0) <= 1e-12);
    CHECK(std::abs(pair.f_a_tilde.total_mass() - (1.0 - pair.delta)) <= 1e-12);
  }
}

TEST_CASE("incomplete and full apparent cdfs are ordered and nested") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 100; ++rep) {
    const auto inst = random_instance(rng);
    const auto pair = apparent_pair(inst.sample, inst.assignment);
    for (double y : probe_points(inst.sample)) {
      CHECK(pair.f_a_tilde(y) <= pair.f_a(y) + 1e-12);
      CHECK(pair.f_a(y) <= pair.f_a_tilde(y) + pair.delta + 1e-12);
    }
    for (int k = 1; k <= 200; ++k) {
      const double t = (1.0 - pair.delta) * k / 200.0;
      CHECK(pair.f_a.quantile(t) <= pair.f_a_tilde.quantile(t));
    }
  }
}

TEST_CASE("bounds collapse to the point-identified effect at c = 0") {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 100; ++rep) {
    const auto inst = random_instance(rng);
    const auto pair = apparent_pair(inst.sample, inst.assignment);
    const auto fy = outcome_cdf(inst.sample);
    for (double tau : {0.3, 0.4, 0.5, 0.6, 0.7}) {
      if (!(tau > pair.delta && tau < 1.0 - pair.delta)) continue;
      const auto b = global_effect_bounds(pair, fy, tau, 0.0);
      const auto point = pair.f_a.quantile(tau) - fy.quantile(tau).value();
      CHECK(b.lower == point);
      CHECK(b.upper == point);
    }
  }
}

TEST_CASE("bounds at c = 1 take the outer branch of each envelope") {
  std::mt19937_64 rng(15);
  for (int rep = 0; rep < 100; ++rep) {
    const auto inst = random_instance(rng);
    const auto pair = apparent_pair(inst.sample, inst.assignment);
    const auto fy = outcome_cdf(inst.sample);
    const double tau = 0.5, d = pair.delta;
    const double q = fy.quantile(tau).value();
    const auto b = global_effect_bounds(pair, fy, tau, 1.0);
    const auto lo_t = pair.f_a_tilde.quantile(tau - d), lo_a = pair.f_a.quantile(tau - d);
    const auto hi_t = pair.f_a_tilde.quantile(tau), hi_a = pair.f_a.quantile(tau + d);
    CHECK(b.lower == (lo_t >= lo_a ? lo_t : lo_a) - q);
    CHECK(b.upper == (hi_t <= hi_a ? hi_t : hi_a) - q);
  }
}

TEST_CASE("bounds are ordered and widen with c") {
  std::mt19937_64 rng(16);
  for (int rep = 0; rep < 100; ++rep) {
    const auto inst = random_instance(rng);
    const auto pair = apparent_pair(inst.sample, inst.assignment);
    const auto fy = outcome_cdf(inst.sample);
    for (double tau : {0.3, 0.5, 0.7}) {
      EffectBounds prev = global_effect_bounds(pair, fy, tau, 0.0);
      for (int k = 1; k <= 20; ++k) {
        const auto b = global_effect_bounds(pair, fy, tau, k / 20.0);
        CHECK(b.lower <= b.upper);
        CHECK(b.lower <= prev.lower);
        CHECK(b.upper >= prev.upper);
        prev = b;
      }
    }
  }
}

TEST_CASE("bounds agree exactly with the brute-force enumeration") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    const auto inst = random_instance(rng);
    const auto pair = apparent_pair(inst.sample, inst.assignment);
    const auto fy = outcome_cdf(inst.sample);
    for (double tau : {0.3, 0.5, 0.7})
      for (double c : {0.0, 0.1, 0.5, 1.0}) {
        const auto fast = global_effect_bounds(pair, fy, tau, c);
        const auto slow = brute_force_bounds(inst.sample, inst.assignment, tau, c);
        CHECK(fast.lower == slow.lower);
        CHECK(fast.upper == slow.upper);
      }
  }
}

TEST_CASE("bounds agree with test-side counting and scanning") {
  std::mt19937_64 rng(18);
  for (int rep = 0; rep < 50; ++rep) {
    const auto inst = random_instance(rng);
    const auto pair = apparent_pair(inst.sample, inst.assignment);
    const auto fy = outcome_cdf(inst.sample);
    const testing::CountingApparent o{inst.sample, inst.assignment.d_delta, inst.assignment.delta};
    const std::vector<double> cand(inst.sample.y().begin(), inst.sample.y().end());
    const double d = o.delta;
    auto inv = [&](auto cdf, double t, double total) {
      return testing::scan_quantile(cand, cdf, t, total, kMassSlack);
    };
    auto fa = [&](double y) { return o.apparent(y); };
    auto ft = [&](double y) { return o.incomplete(y); };
    auto fo = [&](double y) { return o.outcome(y); };
    for (double tau : {0.3, 0.5, 0.7})
      for (double c : {0.0, 0.5, 1.0}) {
        const double q = inv(fo, tau, 1.0);
        const double lo = std::max(inv(ft, tau - d, 1.0 - d), inv(fa, tau - d * c, 1.0)) - q;
        const double hi = std::min(inv(ft, tau, 1.0 - d), inv(fa, tau + d * c, 1.0)) - q;
        const auto b = global_effect_bounds(pair, fy, tau, c);
        CHECK(b.lower.value() == lo);
        CHECK(b.upper.value() == hi);
      }
  }
}

TEST_CASE("bounds reject out-of-range tau and c") {
  const auto inst = slack_fixture();
  const auto pair = apparent_pair(inst.sample, inst.assignment);
  const auto fy = outcome_cdf(inst.sample);
  auto code = [&](double tau, double c) {
    try {
      global_effect_bounds(pair, fy, tau, c);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidConfig;
  };
  CHECK(code(0.1, 0.5) == ErrorCode::TauOutOfRange);
  CHECK(code(0.9, 0.5) == ErrorCode::TauOutOfRange);
  CHECK(code(0.05, 0.5) == ErrorCode::TauOutOfRange);
  CHECK(code(0.5, -0.01) == ErrorCode::COutOfRange);
  CHECK(code(0.5, 1.01) == ErrorCode::COutOfRange);
  CHECK(code(0.5, std::nan("")) == ErrorCode::COutOfRange);

  const std::vector<double> taus = {0.3, 0.95};
  CHECK_THROWS_AS(global_bounds_curve(pair, fy, taus, 0.5), Error);
  CHECK_THROWS_AS(breakdown_frontier(pair, fy, taus, 0.1, Side::LowerConclusion), Error);
}

TEST_CASE("bounds curve is the elementwise bounds") {
  std::mt19937_64 rng(19);
  const auto inst = random_instance(rng);
  const auto pair = apparent_pair(inst.sample, inst.assignment);
  const auto fy = outcome_cdf(inst.sample);
  const auto taus = default_tau_grid(pair.delta);
  const auto curve = global_bounds_curve(pair, fy, taus, 0.4);
  REQUIRE(curve.taus.size() == taus.size());
  CHECK(curve.c == 0.4);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const auto b = global_effect_bounds(pair, fy, taus[i], 0.4);
    CHECK(curve.lower[i] == b.lower);
    CHECK(curve.upper[i] == b.upper);
  }
}

TEST_CASE("frontier at a very negative threshold is tau over delta") {
  std::mt19937_64 rng(20);
  const auto inst = random_instance(rng);
  const auto pair = apparent_pair(inst.sample, inst.assignment);
  const auto fy = outcome_cdf(inst.sample);
  const std::vector<double> taus = {0.3, 0.5};
  const auto f = breakdown_frontier(pair, fy, taus, -1e6, Side::LowerConclusion);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    CHECK(f.c_values[i] == taus[i] / pair.delta);
    CHECK(f.clamped[i] == 1.0);
  }
  const auto hi = breakdown_frontier(pair, fy, taus, 1e6, Side::LowerConclusion);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    CHECK(hi.c_values[i] == doctest::Approx((taus[i] - 1.0) / pair.delta));
    CHECK(hi.clamped[i] == 0.0);
  }
}

TEST_CASE("frontier is zero where the shifted apparent cdf hits tau") {
  // Integer outcomes keep q + g exact.
  Sample s({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {1, 0, 1, 0, 1, 0, 1, 0, 1, 0},
           std::vector<Covariate>(10, Covariate{0}));
  const auto a = assign_threshold_policy(s, 0.2, s.y());
  const auto pair = apparent_pair(s, a);
  const auto fy = outcome_cdf(s);
  int tested = 0;
  for (std::size_t k = 0; k < pair.f_a.support().size(); ++k) {
    const double tau = pair.f_a.cum()[k];
    if (!(tau > 0.2 && tau < 0.8)) continue;
    const double g = pair.f_a.support()[k] - fy.quantile(tau).value();
    const double taus[] = {tau};
    const auto f = breakdown_frontier(pair, fy, taus, g, Side::LowerConclusion);
    CHECK(f.c_values[0] == 0.0);
    ++tested;
  }
  CHECK(tested > 0);
}

TEST_CASE("frontier satisfies its defining identity on the default grid") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    const auto inst = random_instance(rng);
    const auto pair = apparent_pair(inst.sample, inst.assignment);
    const auto fy = outcome_cdf(inst.sample);
    const auto taus = default_tau_grid(pair.delta);
    for (double g : {-0.5, 0.0, 0.1, 0.75}) {
      const auto f = breakdown_frontier(pair, fy, taus, g, Side::LowerConclusion);
      for (std::size_t i = 0; i < taus.size(); ++i) {
        const double lhs = pair.delta * f.c_values[i] + pair.f_a(fy.quantile(taus[i]).value() + g);
        CHECK(std::abs(lhs - taus[i]) <= 1e-12);
        CHECK(f.clamped[i] == clamp_unit(f.c_values[i]));
      }
    }
  }
}

TEST_CASE("frontier is nonincreasing in g and the upper side is its negation") {
  std::mt19937_64 rng(22);
  for (int rep = 0; rep < 50; ++rep) {
    const auto inst = random_instance(rng);
    const auto pair = apparent_pair(inst.sample, inst.assignment);
    const auto fy = outcome_cdf(inst.sample);
    const auto taus = default_tau_grid(pair.delta);
    auto prev = breakdown_frontier(pair, fy, taus, -2.0, Side::LowerConclusion);
    for (int k = 1; k <= 40; ++k) {
      const double g = -2.0 + 0.1 * k;
      const auto f = breakdown_frontier(pair, fy, taus, g, Side::LowerConclusion);
      const auto u = breakdown_frontier(pair, fy, taus, g, Side::UpperConclusion);
      for (std::size_t i = 0; i < taus.size(); ++i) {
        CHECK(f.c_values[i] <= prev.c_values[i]);
        CHECK(u.c_values[i] == -f.c_values[i]);
      }
      prev = f;
    }
  }
}

TEST_CASE("frontier with a per-tau threshold matches scalar evaluations") {
  std::mt19937_64 rng(23);
  const auto inst = random_instance(rng);
  const auto pair = apparent_pair(inst.sample, inst.assignment);
  const auto fy = outcome_cdf(inst.sample);
  const std::vector<double> taus = {0.3, 0.4, 0.5, 0.6};
  const std::vector<double> gs = {-0.2, 0.0, 0.3, 0.6};
  const auto f = breakdown_frontier(pair, fy, taus, gs, Side::LowerConclusion);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double one[] = {taus[i]};
    CHECK(f.c_values[i] == breakdown_frontier(pair, fy, one, gs[i], Side::LowerConclusion).c_values[0]);
  }
  const std::vector<double> short_g = {0.1};
  CHECK_THROWS_AS(breakdown_frontier(pair, fy, taus, short_g, Side::LowerConclusion), Error);
}

TEST_CASE("derived bounds clamp the frontier before evaluating the bounds") {
  std::mt19937_64 rng(24);
  for (int rep = 0; rep < 30; ++rep) {
    const auto inst = random_instance(rng);
    const auto pair = apparent_pair(inst.sample, inst.assignment);
    const auto fy = outcome_cdf(inst.sample);
    const auto taus = default_tau_grid(pair.delta);

    const auto collapsed = derived_bounds(pair, fy, 0.5, 1e6, taus);
    CHECK(collapsed.c_raw < 0.0);
    CHECK(collapsed.c_clamped == 0.0);
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const auto point = pair.f_a.quantile(taus[i]) - fy.quantile(taus[i]).value();
      CHECK(collapsed.curve.lower[i] == point);
      CHECK(collapsed.curve.upper[i] == point);
    }

    const auto widest = derived_bounds(pair, fy, 0.5, -1e6, taus);
    CHECK(widest.c_raw > 1.0);
    CHECK(widest.c_clamped == 1.0);
    const auto full = global_bounds_curve(pair, fy, taus, 1.0);
    CHECK(widest.curve.lower == full.lower);
    CHECK(widest.curve.upper == full.upper);
  }
}

TEST_CASE("derived lower bound at tau star sits just below g") {
  // Binding case: the lower bound at tau* is the largest apparent support
  // point at or below q + g, so g - lower is at most the local outcome gap.
  DgpSpec spec;
  spec.n = 100000;
  spec.seed = 5;
  const auto s = generate_dgp(spec);
  const auto a = assign_threshold_policy(s, 0.1, s.y());
  const auto pair = apparent_pair(s, a);
  const auto fy = outcome_cdf(s);
  const double taus[] = {0.3};
  const auto d = derived_bounds(pair, fy, 0.3, 0.1, taus);
  REQUIRE(d.c_raw > 0.0);
  REQUIRE(d.c_raw < 1.0);
  CHECK(sharpness_diagnostic(pair, fy, 0.3, d.c_raw) == Sharpness::Binding);
  const double gap = 0.1 - d.curve.lower[0].value();
  CHECK(gap >= 0.0);
  CHECK(gap <= 1e-3);
}

TEST_CASE("sharpness is binding at c = 0 for continuous outcomes") {
  std::mt19937_64 rng(25);
  testing::SmallSampleOptions opt;
  opt.ties = false;
  for (int rep = 0; rep < 100; ++rep) {
    const auto inst = random_instance(rng, opt);
    const auto pair = apparent_pair(inst.sample, inst.assignment);
    const auto fy = outcome_cdf(inst.sample);
    for (double tau : {0.3, 0.5, 0.7}) {
      // F~^-1(tau - delta) <= F_A^-1(tau) always; slack only on a shared step.
      CHECK(pair.f_a_tilde.quantile(tau - pair.delta) <= pair.f_a.quantile(tau));
      if (pair.f_a_tilde.quantile(tau - pair.delta) < pair.f_a.quantile(tau))
        CHECK(sharpness_diagnostic(pair, fy, tau, 0.0) == Sharpness::Binding);
    }
  }
}

TEST_CASE("sharpness is slack when the matched proxy sits at the bottom") {
  const auto inst = slack_fixture();
  REQUIRE(inst.assignment.newly_treated_count(inst.sample) == 1);
  REQUIRE(inst.assignment.d_delta[5] == 1);
  const auto pair = apparent_pair(inst.sample, inst.assignment);
  const auto fy = outcome_cdf(inst.sample);
  // F~ steps 0.1 at 1..5 and 7..10; F_A = F~ + 0.1 from y = 1.
  CHECK(pair.f_a_tilde.quantile(0.4).value() == 4.0);
  CHECK(pair.f_a.quantile(0.5).value() == 4.0);
  CHECK(pair.f_a.quantile(0.4).value() == 3.0);
  CHECK(fy.quantile(0.5).value() == 5.0);
  for (double c : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(sharpness_diagnostic(pair, fy, 0.5, c) == Sharpness::Slack);
    CHECK(global_effect_bounds(pair, fy, 0.5, c).lower.value() == -1.0);
  }
}

TEST_CASE("sharpness is binding on the synthetic design at tau 0.3") {
  DgpSpec spec;
  spec.seed = 3;
  const auto s = generate_dgp(spec);
  const auto a = assign_threshold_policy(s, 0.1, s.y());
  const auto pair = apparent_pair(s, a);
  const auto fy = outcome_cdf(s);
  const double taus[] = {0.3};
  const auto f = breakdown_frontier(pair, fy, taus, 0.1, Side::LowerConclusion);
  CHECK(sharpness_diagnostic(pair, fy, 0.3, f.c_values[0]) == Sharpness::Binding);
  CHECK_THROWS_AS(sharpness_diagnostic(pair, fy, 0.95, 0.0), Error);
}

TEST_CASE("frontier slopes reflect the step structure") {
  const auto inst = slack_fixture();
  const auto pair = apparent_pair(inst.sample, inst.assignment);
  const auto fy = outcome_cdf(inst.sample);
  const std::vector<double> taus = {0.5};  // q = 5

  // [q + g, q + g + dg] = [5.2, 5.7] holds no atom.
  const auto flat = breakdown_frontier(pair, fy, taus, 0.2, Side::LowerConclusion);
  CHECK(frontier_slope_diagnostics(flat, pair, fy, 0.5)[0] == 0.0);

  // [5.5, 7.5] crosses the atom at 7 whose mass is 0.1.
  const auto jump = breakdown_frontier(pair, fy, taus, 0.5, Side::LowerConclusion);
  const double expected = -0.1 / (pair.delta * 2.0);
  CHECK(frontier_slope_diagnostics(jump, pair, fy, 2.0)[0] == doctest::Approx(expected).epsilon(1e-12));

  CHECK_THROWS_AS(frontier_slope_diagnostics(jump, pair, fy, 0.0), Error);
}

TEST_CASE("frontier slopes on the synthetic design are nonpositive") {
  DgpSpec spec;
  spec.seed = 4;
  const auto s = generate_dgp(spec);
  const auto a = assign_threshold_policy(s, 0.1, s.y());
  const auto pair = apparent_pair(s, a);
  const auto fy = outcome_cdf(s);
  const auto taus = default_tau_grid(0.1);
  const auto f = breakdown_frontier(pair, fy, taus, 0.1, Side::LowerConclusion);
  const auto slopes = frontier_slope_diagnostics(f, pair, fy, 0.01);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double one[] = {taus[i]};
    const double direct = (breakdown_frontier(pair, fy, one, 0.11, Side::LowerConclusion).c_values[0] -
                           f.c_values[i]) / 0.01;
    CHECK(slopes[i] <= 0.0);
    CHECK(slopes[i] == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("default tau grid spans the admissible interior") {
  const auto g = default_tau_grid(0.1);
  REQUIRE(g.size() == 71);
  CHECK(g.front() == doctest::Approx(0.15));
  CHECK(g.back() == 0.85);
  CHECK(g[35] == doctest::Approx(0.5));
  const auto wide = default_tau_grid(0.3);
  CHECK(wide.front() == doctest::Approx(0.31));
  CHECK(wide.back() == doctest::Approx(0.69));
  CHECK_THROWS_AS(default_tau_grid(0.5), Error);
  CHECK(linear_grid(0.2, 0.4, 1) == std::vector<double>{0.2});
  CHECK(linear_grid(0.2, 0.4, 0).empty());
}

TEST_CASE("large-sample frontier and bounds approach the population values") {
  const testing::PopulationPair pop;
  DgpSpec spec;
  spec.n = 200000;
  spec.seed = 9;
  const auto s = generate_dgp(spec);
  const auto a = assign_threshold_policy(s, 0.1, s.y());
  const auto pair = apparent_pair(s, a);
  const auto fy = outcome_cdf(s);
  const std::vector<double> taus = {0.25, 0.3, 0.5, 0.75};
  const auto f = breakdown_frontier(pair, fy, taus, 0.1, Side::LowerConclusion);
  for (std::size_t i = 0; i < taus.size(); ++i)
    CHECK(std::abs(f.c_values[i] - pop.frontier_lower(taus[i], 0.1)) <= 0.02);
  for (double c : {0.0, 0.5, 1.0}) {
    const auto b = global_effect_bounds(pair, fy, 0.5, c);
    CHECK(std::abs(b.lower.value() - pop.bound_lower(0.5, c)) <= 0.02);
    CHECK(std::abs(b.upper.value() - pop.bound_upper(0.5, c)) <= 0.02);
  }
}
