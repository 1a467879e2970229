#include "qbf/ecdf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "qbf/error.hpp"

namespace qbf {

std::string to_token(ExtendedReal v) {
  if (v.is_neg_inf()) return "-inf";
  if (v.is_pos_inf()) return "+inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v.value());
  return std::string(buf, res.ptr);
}

double compensated_sum(std::span<const double> terms) {
  double sum = 0.0;
  double comp = 0.0;
  for (double t : terms) {
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t))
      comp += (sum - s) + t;
    else
      comp += (t - s) + sum;
    sum = s;
  }
  return sum + comp;
}

StepCdf::StepCdf(std::vector<double> support, std::vector<double> cum)
    : support_(std::move(support)), cum_(std::move(cum)) {
  if (support_.size() != cum_.size())
    throw Error(ErrorCode::LengthMismatch, "step function support and mass arrays differ in length");
}

double StepCdf::eval(double y) const {
  auto it = std::upper_bound(support_.begin(), support_.end(), y);
  if (it == support_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

ExtendedReal StepCdf::quantile(double t) const {
  if (t <= 0.0 || support_.empty()) return ExtendedReal::neg_inf();
  if (t > total_mass() + kMassSlack) return ExtendedReal::pos_inf();
  auto it = std::lower_bound(cum_.begin(), cum_.end(), t - kMassSlack);
  if (it == cum_.end()) --it;
  return ExtendedReal(support_[static_cast<std::size_t>(it - cum_.begin())]);
}

double eval_cdf(const StepCdf& f, double y) { return f.eval(y); }

ExtendedReal quantile(const StepCdf& f, double t) { return f.quantile(t); }

StepCdf ecdf_from_values(std::span<const double> values, double weight) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "cannot build an ECDF from no values");
  if (!(weight > 0.0 && weight <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "ECDF weight must lie in (0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());

  std::vector<double> support;
  std::vector<double> cum;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    support.push_back(sorted[i]);
    cum.push_back(weight * (static_cast<double>(i + 1) / count));
  }
  return StepCdf(std::move(support), std::move(cum));
}

StepCdf mixture_cdf(std::span<const std::pair<const StepCdf*, double>> parts) {
  std::vector<std::pair<const StepCdf*, double>> live;
  std::size_t total = 0;
  for (const auto& [f, w] : parts) {
    if (w < 0.0) throw Error(ErrorCode::InvalidConfig, "mixture weights must be nonnegative");
    if (w > 0.0 && f != nullptr && !f->empty()) {
      live.emplace_back(f, w);
      total += f->support().size();
    }
  }
  std::vector<double> support;
  support.reserve(total);
  for (const auto& [f, w] : live) support.insert(support.end(), f->support().begin(), f->support().end());
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  std::vector<std::size_t> cursor(live.size(), 0);
  std::vector<double> terms(live.size(), 0.0);
  std::vector<double> cum(support.size(), 0.0);
  for (std::size_t j = 0; j < support.size(); ++j) {
    const double y = support[j];
    for (std::size_t k = 0; k < live.size(); ++k) {
      auto s = live[k].first->support();
      while (cursor[k] < s.size() && s[cursor[k]] <= y) ++cursor[k];
      terms[k] = cursor[k] == 0 ? 0.0 : live[k].second * live[k].first->cum()[cursor[k] - 1];
    }
    cum[j] = compensated_sum(terms);
    if (j > 0 && cum[j] < cum[j - 1]) cum[j] = cum[j - 1];
  }
  return StepCdf(std::move(support), std::move(cum));
}

StepCdf mixture_cdf(std::initializer_list<std::pair<const StepCdf*, double>> parts) {
  return mixture_cdf(std::span<const std::pair<const StepCdf*, double>>(parts.begin(), parts.size()));
}

namespace {

bool selected(const Sample& s, const PolicyAssignment* a, RowPredicate p, std::size_t i) {
  switch (p.kind) {
    case RowPredicate::Kind::Treated: return s.d()[i] == 1;
    case RowPredicate::Kind::Control: return s.d()[i] == 0;
    case RowPredicate::Kind::PolicyUntreated: return a->d_delta[i] == 0;
    case RowPredicate::Kind::TreatedInCell: return s.d()[i] == 1 && s.cells()[i] == p.cell;
  }
  return false;
}

}  // namespace

StepCdf conditional_ecdf(const Sample& sample, const PolicyAssignment* assignment,
                         RowPredicate predicate) {
  if (predicate.kind == RowPredicate::Kind::PolicyUntreated && assignment == nullptr)
    throw Error(ErrorCode::InvalidConfig, "predicate D_delta=0 requires a policy assignment");
  std::vector<double> values;
  for (std::size_t i = 0; i < sample.n(); ++i)
    if (selected(sample, assignment, predicate, i)) values.push_back(sample.y()[i]);
  if (values.empty()) {
    std::string what = "selected row subset is empty";
    if (predicate.kind == RowPredicate::Kind::TreatedInCell)
      what = "no treated rows in covariate cell " + std::to_string(predicate.cell);
    throw Error(ErrorCode::EmptyCell, what);
  }
  return ecdf_from_values(values, 1.0);
}

double StepPmf::total() const { return compensated_sum(probs); }

StepPmf pmf_from_rows(const Sample& sample, std::span<const std::uint8_t> mask) {
  if (mask.size() != sample.n())
    throw Error(ErrorCode::LengthMismatch, "row mask length differs from sample size");
  std::vector<std::size_t> counts(sample.num_levels(), 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < sample.n(); ++i) {
    if (mask[i]) {
      ++counts[sample.cells()[i]];
      ++total;
    }
  }
  if (total == 0) throw Error(ErrorCode::EmptyCell, "row mask selects no rows");
  StepPmf pmf;
  pmf.keys = sample.levels();
  pmf.probs.resize(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k)
    pmf.probs[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  return pmf;
}

}  // namespace qbf
