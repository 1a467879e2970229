#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qbf/bounds_global.hpp"
#include "qbf/core_data.hpp"
#include "qbf/ecdf.hpp"

namespace qbf {

/// Selection model with a threshold-crossing treatment:
///   V ~ N(0,1), D = 1{V >= 0}, X ~ x_probs independent of V,
///   U_d = rho_sel V + sqrt(1 - rho_sel^2) e_d,
///   Y(0) = x_shift X + U_0,  Y(1) = x_shift X + effect + U_1.
struct DgpSpec {
  std::size_t n = 2000;
  double rho_sel = 0.5;
  double effect = 0.4;
  std::vector<double> x_probs{0.3, 0.4, 0.3};
  double x_shift = 0.5;
  std::uint64_t seed = 0;
};

Sample generate_dgp(const DgpSpec& spec);

struct OracleQuery {
  double tau = 0.5;
  double g = 0.0;
  double c = 0.0;
};

struct OracleValue {
  double value = 0.0;
  double mc_se = 0.0;
};

/// Population quantities for one query, each with a Monte Carlo standard error.
struct OracleEntry {
  OracleQuery query;
  OracleValue frontier_lower;  // c_{tau,L} at g
  OracleValue frontier_upper;  // c_{tau,U} at g
  OracleValue apparent_level;  // F_A(F_Y^-1(tau) + g)
  OracleValue bound_lower;     // global bounds at c
  OracleValue bound_upper;
  OracleValue point_effect;    // F_A^-1(tau) - F_Y^-1(tau)
  OracleValue derived_lower;   // lower bound at tau with tau* = tau and c = clamp(c_L)
};

struct OracleReport {
  std::vector<OracleEntry> entries;
  std::size_t oracle_n = 0;
  std::size_t half_samples = 0;
};

inline constexpr std::size_t kDefaultOracleN = 1'000'000;
inline constexpr std::size_t kOracleHalfSamples = 10;

/// Large-sample plug-in oracle. The point values come from one sample of size
/// oracle_n; mc_se is the spread of ten independent oracle_n/2 samples scaled
/// by 1/sqrt(2).
OracleReport oracle_population_quantities(const DgpSpec& spec, const PolicySpec& policy,
                                          std::span<const OracleQuery> queries,
                                          std::size_t oracle_n, std::uint64_t seed,
                                          int threads = 0);

/// Independent O(n^2) re-derivation of the global-effect bounds from raw
/// counts and linear-scan inverses. Limited to n <= 200.
EffectBounds brute_force_bounds(const Sample& sample, const PolicyAssignment& assignment, double tau,
                                double c);

struct CoverageTable {
  std::vector<double> taus;
  std::vector<double> oracle_c;
  std::vector<double> oracle_mc_se;
  std::vector<double> coverage;
  std::vector<double> mc_se;
  std::vector<double> median_width;
  std::size_t runs = 0;
  std::size_t failed_runs = 0;
  std::size_t replications = 0;
  std::size_t n_data = 0;
  /// True when fewer than 50 Monte Carlo runs were requested.
  bool low_run_count = false;
};

struct CoverageConfig {
  std::size_t n_data = 2000;
  std::size_t replications = 200;
  std::size_t runs = 300;
  double level = 0.95;
  std::uint64_t seed = 0;
  std::size_t oracle_n = kDefaultOracleN;
  int threads = 0;
};

/// Monte Carlo coverage of bootstrap percentile bands against the oracle frontier.
CoverageTable coverage_study(const DgpSpec& spec, const PolicySpec& policy, double g,
                             std::span<const double> taus, const CoverageConfig& cfg);

}  // namespace qbf
