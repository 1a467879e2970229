#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qbf {

/// One covariate tuple, e.g. (education, age band, married) as integer codes.
using Covariate = std::vector<std::int64_t>;

/// Micro-data: outcome y, binary treatment d, finite-support covariates x and
/// an optional auxiliary ranking column z for threshold policies.
///
/// Covariate tuples are stored as dense cell codes into a shared level table
/// (sorted unique tuples), which keeps resampled copies cheap.
class Sample {
 public:
  Sample() = default;
  Sample(std::vector<double> y, std::vector<std::uint8_t> d, std::vector<Covariate> x,
         std::vector<double> z = {});

  /// Builds a sample from pre-coded cells sharing an existing level table.
  static Sample from_cells(std::vector<double> y, std::vector<std::uint8_t> d,
                           std::vector<std::uint32_t> cells,
                           std::shared_ptr<const std::vector<Covariate>> levels,
                           std::vector<double> z = {});

  std::size_t n() const noexcept { return y_.size(); }
  std::span<const double> y() const noexcept { return y_; }
  std::span<const std::uint8_t> d() const noexcept { return d_; }
  std::span<const std::uint32_t> cells() const noexcept { return cells_; }
  std::span<const double> z() const noexcept { return z_; }
  bool has_z() const noexcept { return !z_.empty(); }

  const std::vector<Covariate>& levels() const noexcept { return *levels_; }
  std::size_t num_levels() const noexcept { return levels_->size(); }
  const Covariate& x(std::size_t i) const { return (*levels_)[cells_[i]]; }
  std::shared_ptr<const std::vector<Covariate>> shared_levels() const { return levels_; }

  std::size_t treated_count() const noexcept;
  /// Empirical treated share p-hat.
  double treated_share() const noexcept;

  /// Rows picked by index (with repetition); used by the bootstrap.
  Sample take(std::span<const std::size_t> rows) const;

 private:
  std::vector<double> y_;
  std::vector<std::uint8_t> d_;
  std::vector<std::uint32_t> cells_;
  std::vector<double> z_;
  std::shared_ptr<const std::vector<Covariate>> levels_ =
      std::make_shared<const std::vector<Covariate>>();
};

struct Issue {
  std::string code;
  std::string message;
};

class ValidationReport {
 public:
  std::vector<Issue> errors;
  std::vector<Issue> warnings;

  bool ok() const noexcept { return errors.empty(); }
  bool has_error(std::string_view code) const;
  bool has_warning(std::string_view code) const;
};

/// Checks the sample invariants. With no declared support, the observed
/// tuples are the support and UNKNOWN_SUPPORT cannot trigger.
ValidationReport validate_sample(const Sample& sample,
                                 const std::optional<std::vector<Covariate>>& support = std::nullopt);

/// Throws the first validation error, if any.
void require_valid(const Sample& sample);

enum class PolicyKind { Randomized, Threshold };
enum class RankingSource { Outcome, Auxiliary };

struct PolicySpec {
  PolicyKind kind = PolicyKind::Threshold;
  double delta = 0.1;
  RankingSource z_source = RankingSource::Outcome;  // threshold only
  std::uint64_t seed = 0;                          // randomized only
};

struct PolicyAssignment {
  std::vector<std::uint8_t> d_delta;
  double delta = 0.0;
  double realized_rate = 0.0;
  std::vector<Issue> warnings;

  std::size_t newly_treated_count(const Sample& sample) const;
};

/// Each control row is independently shifted with probability delta/(1-p).
PolicyAssignment assign_randomized_policy(const Sample& sample, double delta, std::uint64_t seed);

/// Controls whose ranking value is at or below the empirical delta/(1-p)
/// quantile of the control group are shifted. Ties at the threshold all move.
PolicyAssignment assign_threshold_policy(const Sample& sample, double delta,
                                         std::span<const double> z);

/// Dispatches on policy kind; threshold ranking comes from y or the sample's z column.
PolicyAssignment assign_policy(const Sample& sample, const PolicySpec& policy);

/// Throws DELTA_OUT_OF_RANGE unless delta lies strictly inside (0, 1-p).
void check_delta(const Sample& sample, double delta);

}  // namespace qbf
