#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qbf/bounds_global.hpp"
#include "qbf/bounds_marginal.hpp"
#include "qbf/core_data.hpp"

namespace qbf {

struct BootstrapConfig {
  std::size_t replications = 1000;
  double level = 0.95;
  std::uint64_t seed = 0;
  /// Resample the original D_delta column instead of re-running the policy.
  bool freeze_assignment = false;
  /// Worker threads; 0 uses the OpenMP default, 1 runs the serial reference loop.
  int threads = 0;
};

/// Pointwise percentile band around a frontier.
struct BandCurve {
  std::vector<double> taus;
  std::vector<double> point;
  std::vector<double> lo;
  std::vector<double> hi;
  std::size_t replications = 0;
  std::size_t failed = 0;
};

/// Frontier from raw data: assign the policy, build F_A and F_Y, evaluate.
FrontierCurve estimate_frontier(const Sample& sample, const PolicySpec& policy, double g, Side side,
                                std::span<const double> taus);

/// Type-1 empirical quantiles at (1-level)/2 and 1-(1-level)/2.
std::pair<double, double> percentile_interval(std::span<const double> draws, double level);

/// Replicate b resamples rows with stream (seed, b, 0) and, for randomized
/// policies, redraws the assignment with stream (seed, b, 1). Failed
/// replicates are dropped; more than 10% failures is BOOTSTRAP_DEGENERATE.
BandCurve bootstrap_frontier(const Sample& sample, const PolicySpec& policy, double g, Side side,
                             std::span<const double> taus, const BootstrapConfig& cfg);

BandCurve bootstrap_marginal_frontier(const Sample& sample, double alpha,
                                      std::span<const double> taus, const BootstrapConfig& cfg);

/// Raw replicate matrix (replications x taus); rows of failed replicates are empty.
struct ReplicateDraws {
  std::vector<std::vector<double>> rows;
  std::size_t failed = 0;
};

ReplicateDraws frontier_draws(const Sample& sample, const PolicySpec& policy, double g, Side side,
                              std::span<const double> taus, const BootstrapConfig& cfg);

/// Plain loop over replicates; kept as the reference for the OpenMP path.
ReplicateDraws frontier_draws_serial(const Sample& sample, const PolicySpec& policy, double g,
                                     Side side, std::span<const double> taus,
                                     const BootstrapConfig& cfg);

/// Seed for a named substream, used when a consumer takes a seed rather than an engine.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream);

void require_nondegenerate_outcome(const Sample& sample);

}  // namespace qbf
