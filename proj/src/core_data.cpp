#include "qbf/core_data.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "qbf/ecdf.hpp"
#include "qbf/error.hpp"
#include "qbf/random.hpp"

namespace qbf {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::InvalidTreatment: return "INVALID_TREATMENT";
    case ErrorCode::TooFewRows: return "TOO_FEW_ROWS";
    case ErrorCode::NoTreated: return "NO_TREATED";
    case ErrorCode::NoControls: return "NO_CONTROLS";
    case ErrorCode::UnknownSupport: return "UNKNOWN_SUPPORT";
    case ErrorCode::EmptyInput: return "EMPTY_INPUT";
    case ErrorCode::EmptyCell: return "EMPTY_CELL";
    case ErrorCode::NoNewlyTreated: return "NO_NEWLY_TREATED";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::MissingColumn: return "MISSING_COLUMN";
    case ErrorCode::DeltaOutOfRange: return "DELTA_OUT_OF_RANGE";
    case ErrorCode::TauOutOfRange: return "TAU_OUT_OF_RANGE";
    case ErrorCode::COutOfRange: return "C_OUT_OF_RANGE";
    case ErrorCode::AlphaOutOfRange: return "ALPHA_OUT_OF_RANGE";
    case ErrorCode::BandwidthNonpositive: return "BANDWIDTH_NONPOSITIVE";
    case ErrorCode::InvalidConfig: return "INVALID_CONFIG";
    case ErrorCode::DegenerateOutcome: return "DEGENERATE_OUTCOME";
    case ErrorCode::ZeroDensity: return "ZERO_DENSITY";
    case ErrorCode::BootstrapDegenerate: return "BOOTSTRAP_DEGENERATE";
  }
  return "UNKNOWN";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::DeltaOutOfRange:
    case ErrorCode::TauOutOfRange:
    case ErrorCode::COutOfRange:
    case ErrorCode::AlphaOutOfRange:
    case ErrorCode::BandwidthNonpositive:
    case ErrorCode::InvalidConfig:
      return ErrorCategory::Config;
    case ErrorCode::DegenerateOutcome:
    case ErrorCode::ZeroDensity:
    case ErrorCode::BootstrapDegenerate:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Data;
  }
}

Sample::Sample(std::vector<double> y, std::vector<std::uint8_t> d, std::vector<Covariate> x,
               std::vector<double> z)
    : y_(std::move(y)), d_(std::move(d)), z_(std::move(z)) {
  std::set<Covariate> unique(x.begin(), x.end());
  std::vector<Covariate> levels(unique.begin(), unique.end());
  cells_.reserve(x.size());
  for (const auto& tuple : x) {
    auto it = std::lower_bound(levels.begin(), levels.end(), tuple);
    cells_.push_back(static_cast<std::uint32_t>(it - levels.begin()));
  }
  levels_ = std::make_shared<const std::vector<Covariate>>(std::move(levels));
}

Sample Sample::from_cells(std::vector<double> y, std::vector<std::uint8_t> d,
                          std::vector<std::uint32_t> cells,
                          std::shared_ptr<const std::vector<Covariate>> levels,
                          std::vector<double> z) {
  Sample s;
  s.y_ = std::move(y);
  s.d_ = std::move(d);
  s.cells_ = std::move(cells);
  s.z_ = std::move(z);
  s.levels_ = std::move(levels);
  return s;
}

std::size_t Sample::treated_count() const noexcept {
  return static_cast<std::size_t>(std::count(d_.begin(), d_.end(), std::uint8_t{1}));
}

double Sample::treated_share() const noexcept {
  if (y_.empty()) return 0.0;
  return static_cast<double>(treated_count()) / static_cast<double>(n());
}

Sample Sample::take(std::span<const std::size_t> rows) const {
  Sample s;
  s.levels_ = levels_;
  s.y_.reserve(rows.size());
  s.d_.reserve(rows.size());
  s.cells_.reserve(rows.size());
  if (has_z()) s.z_.reserve(rows.size());
  for (std::size_t r : rows) {
    s.y_.push_back(y_[r]);
    s.d_.push_back(d_[r]);
    s.cells_.push_back(cells_[r]);
    if (has_z()) s.z_.push_back(z_[r]);
  }
  return s;
}

namespace {

std::string format_tuple(const Covariate& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ')';
  return os.str();
}

void add(std::vector<Issue>& issues, ErrorCode code, std::string message) {
  issues.push_back({std::string(error_code_name(code)), std::move(message)});
}

}  // namespace

bool ValidationReport::has_error(std::string_view code) const {
  return std::any_of(errors.begin(), errors.end(), [&](const Issue& i) { return i.code == code; });
}

bool ValidationReport::has_warning(std::string_view code) const {
  return std::any_of(warnings.begin(), warnings.end(),
                     [&](const Issue& i) { return i.code == code; });
}

ValidationReport validate_sample(const Sample& sample,
                                 const std::optional<std::vector<Covariate>>& support) {
  ValidationReport report;
  const std::size_t n = sample.n();
  if (sample.d().size() != n || sample.cells().size() != n ||
      (sample.has_z() && sample.z().size() != n)) {
    std::ostringstream os;
    os << "column lengths differ: y=" << n << " d=" << sample.d().size()
       << " x=" << sample.cells().size();
    if (sample.has_z()) os << " z=" << sample.z().size();
    add(report.errors, ErrorCode::LengthMismatch, os.str());
    return report;
  }
  if (n < 2) add(report.errors, ErrorCode::TooFewRows, "at least two rows are required");

  std::size_t treated = 0;
  std::size_t bad_d = 0;
  for (auto v : sample.d()) {
    if (v == 1) ++treated;
    else if (v != 0) ++bad_d;
  }
  if (bad_d > 0)
    add(report.errors, ErrorCode::InvalidTreatment,
        std::to_string(bad_d) + " treatment values outside {0,1}");
  if (treated == 0) add(report.errors, ErrorCode::NoTreated, "no row has d=1");
  if (treated + bad_d == n) add(report.errors, ErrorCode::NoControls, "no row has d=0");

  for (double y : sample.y()) {
    if (!std::isfinite(y)) {
      add(report.errors, ErrorCode::ParseError, "non-finite outcome value");
      break;
    }
  }

  if (support) {
    std::set<Covariate> declared(support->begin(), support->end());
    for (const auto& level : sample.levels()) {
      if (!declared.count(level))
        add(report.errors, ErrorCode::UnknownSupport,
            "covariate value " + format_tuple(level) + " is not in the declared support");
    }
  }

  std::vector<std::size_t> treated_in_cell(sample.num_levels(), 0);
  std::vector<std::size_t> rows_in_cell(sample.num_levels(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++rows_in_cell[sample.cells()[i]];
    if (sample.d()[i] == 1) ++treated_in_cell[sample.cells()[i]];
  }
  for (std::size_t k = 0; k < sample.num_levels(); ++k) {
    if (rows_in_cell[k] > 0 && treated_in_cell[k] == 0)
      report.warnings.push_back({"CELL_WITHOUT_TREATED",
                                 "covariate cell " + format_tuple(sample.levels()[k]) +
                                     " has no d=1 rows"});
  }
  return report;
}

void require_valid(const Sample& sample) {
  auto report = validate_sample(sample);
  if (report.ok()) return;
  const auto& first = report.errors.front();
  for (auto code : {ErrorCode::LengthMismatch, ErrorCode::InvalidTreatment, ErrorCode::TooFewRows,
                    ErrorCode::NoTreated, ErrorCode::NoControls, ErrorCode::UnknownSupport,
                    ErrorCode::ParseError}) {
    if (first.code == error_code_name(code)) throw Error(code, first.message);
  }
  throw Error(ErrorCode::InvalidConfig, first.message);
}

std::size_t PolicyAssignment::newly_treated_count(const Sample& sample) const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < d_delta.size(); ++i)
    if (d_delta[i] == 1 && sample.d()[i] == 0) ++count;
  return count;
}

void check_delta(const Sample& sample, double delta) {
  const double p = sample.treated_share();
  if (!(delta > 0.0 && delta < 1.0 - p)) {
    std::ostringstream os;
    os << "delta=" << delta << " must lie in (0, " << 1.0 - p << ")";
    throw Error(ErrorCode::DeltaOutOfRange, os.str());
  }
}

namespace {

PolicyAssignment finish(const Sample& sample, std::vector<std::uint8_t> d_delta, double delta) {
  PolicyAssignment a;
  a.d_delta = std::move(d_delta);
  a.delta = delta;
  const auto shifted = std::count(a.d_delta.begin(), a.d_delta.end(), std::uint8_t{1});
  a.realized_rate = static_cast<double>(shifted) / static_cast<double>(sample.n());
  return a;
}

}  // namespace

PolicyAssignment assign_randomized_policy(const Sample& sample, double delta, std::uint64_t seed) {
  check_delta(sample, delta);
  const double p = sample.treated_share();
  const double prob = delta / (1.0 - p);
  auto rng = make_stream(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<std::uint8_t> d_delta(sample.d().begin(), sample.d().end());
  for (std::size_t i = 0; i < sample.n(); ++i) {
    if (d_delta[i] == 0 && unif(rng) < prob) d_delta[i] = 1;
  }
  auto a = finish(sample, std::move(d_delta), delta);
  const double expected = static_cast<double>(sample.n() - sample.treated_count()) * prob;
  if (expected < 0.5) {
    std::ostringstream os;
    os << "expected number of newly treated rows is " << expected << ", which rounds to zero";
    a.warnings.push_back({"EXPECTED_SHIFT_ZERO", os.str()});
  }
  return a;
}

PolicyAssignment assign_threshold_policy(const Sample& sample, double delta,
                                         std::span<const double> z) {
  if (z.size() != sample.n())
    throw Error(ErrorCode::LengthMismatch, "ranking column length differs from sample size");
  check_delta(sample, delta);
  const double level = delta / (1.0 - sample.treated_share());

  std::vector<double> controls;
  controls.reserve(sample.n() - sample.treated_count());
  for (std::size_t i = 0; i < sample.n(); ++i)
    if (sample.d()[i] == 0) controls.push_back(z[i]);
  const double threshold = ecdf_from_values(controls).quantile(level).value();

  std::vector<std::uint8_t> d_delta(sample.d().begin(), sample.d().end());
  for (std::size_t i = 0; i < sample.n(); ++i)
    if (d_delta[i] == 0 && z[i] <= threshold) d_delta[i] = 1;
  return finish(sample, std::move(d_delta), delta);
}

PolicyAssignment assign_policy(const Sample& sample, const PolicySpec& policy) {
  if (policy.kind == PolicyKind::Randomized)
    return assign_randomized_policy(sample, policy.delta, policy.seed);
  if (policy.z_source == RankingSource::Auxiliary) {
    if (!sample.has_z())
      throw Error(ErrorCode::MissingColumn, "threshold policy requires a ranking column z");
    return assign_threshold_policy(sample, policy.delta, sample.z());
  }
  return assign_threshold_policy(sample, policy.delta, sample.y());
}

}  // namespace qbf
