#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qbf/core_data.hpp"

namespace qbf {

/// A real number or one of the sentinels -inf / +inf produced by quantile
/// evaluation outside the mass range of a step function.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double v) : v_(v) {}

  static constexpr ExtendedReal neg_inf() {
    return ExtendedReal(-std::numeric_limits<double>::infinity());
  }
  static constexpr ExtendedReal pos_inf() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  constexpr double value() const noexcept { return v_; }
  constexpr bool is_finite() const noexcept {
    return v_ > -std::numeric_limits<double>::infinity() &&
           v_ < std::numeric_limits<double>::infinity();
  }
  constexpr bool is_neg_inf() const noexcept {
    return v_ == -std::numeric_limits<double>::infinity();
  }
  constexpr bool is_pos_inf() const noexcept {
    return v_ == std::numeric_limits<double>::infinity();
  }

  /// Shift by a finite amount; sentinels are absorbing.
  constexpr ExtendedReal operator-(double rhs) const { return ExtendedReal(v_ - rhs); }
  constexpr ExtendedReal operator+(double rhs) const { return ExtendedReal(v_ + rhs); }

  friend constexpr bool operator==(ExtendedReal, ExtendedReal) = default;
  friend constexpr auto operator<=>(ExtendedReal a, ExtendedReal b) { return a.v_ <=> b.v_; }

 private:
  double v_ = 0.0;
};

/// CSV token for an extended real: shortest round-trip decimal, or -inf / +inf.
std::string to_token(ExtendedReal v);

/// Cumulative-mass tolerance used when locating generalized inverses. Levels
/// that agree to within this slack are treated as ties, so mathematically
/// equal masses reached through different floating-point paths resolve to the
/// same support point.
inline constexpr double kMassSlack = 1e-12;

/// Right-continuous step function with increments at `support` and total
/// mass in (0, 1]. Immutable after construction.
class StepCdf {
 public:
  StepCdf() = default;
  /// `support` strictly increasing, `cum` nondecreasing and the same length.
  StepCdf(std::vector<double> support, std::vector<double> cum);

  std::span<const double> support() const noexcept { return support_; }
  std::span<const double> cum() const noexcept { return cum_; }
  double total_mass() const noexcept { return cum_.empty() ? 0.0 : cum_.back(); }
  bool empty() const noexcept { return support_.empty(); }

  double operator()(double y) const { return eval(y); }
  double eval(double y) const;
  ExtendedReal quantile(double t) const;

 private:
  std::vector<double> support_;
  std::vector<double> cum_;
};

/// weight * (#{values <= y} / count). Duplicates are merged into one atom.
StepCdf ecdf_from_values(std::span<const double> values, double weight = 1.0);

double eval_cdf(const StepCdf& f, double y);

/// Type-1 generalized inverse inf{y : F(y) >= t}: -inf for t <= 0, +inf for t
/// beyond the total mass, and the largest support point at t == total mass.
ExtendedReal quantile(const StepCdf& f, double t);

/// Pointwise weighted sum over the merged support.
StepCdf mixture_cdf(std::span<const std::pair<const StepCdf*, double>> parts);
StepCdf mixture_cdf(std::initializer_list<std::pair<const StepCdf*, double>> parts);

/// Row subset selector for conditional_ecdf.
struct RowPredicate {
  enum class Kind { Treated, Control, PolicyUntreated, TreatedInCell };
  Kind kind;
  std::uint32_t cell = 0;

  static RowPredicate treated() { return {Kind::Treated}; }
  static RowPredicate control() { return {Kind::Control}; }
  static RowPredicate policy_untreated() { return {Kind::PolicyUntreated}; }
  static RowPredicate treated_in_cell(std::uint32_t cell) { return {Kind::TreatedInCell, cell}; }
};

/// Unit-mass ECDF of y over the rows selected by the predicate. Throws
/// EMPTY_CELL when the subset is empty.
StepCdf conditional_ecdf(const Sample& sample, const PolicyAssignment* assignment,
                         RowPredicate predicate);

/// Probability mass over covariate cells, indexed by the sample's cell codes.
struct StepPmf {
  std::vector<Covariate> keys;
  std::vector<double> probs;

  std::size_t size() const noexcept { return probs.size(); }
  double operator[](std::size_t cell) const { return probs[cell]; }
  double total() const;
};

/// Empirical covariate frequencies over the rows with mask[i] != 0.
StepPmf pmf_from_rows(const Sample& sample, std::span<const std::uint8_t> mask);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> terms);

}  // namespace qbf
