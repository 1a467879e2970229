#include "qbf/bounds_marginal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qbf/error.hpp"

namespace qbf {

namespace {

void check_unit_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    std::ostringstream os;
    os << "tau=" << tau << " must lie in (0, 1)";
    throw Error(ErrorCode::TauOutOfRange, os.str());
  }
}

// CDF levels entering the marginal frontier at one quantile.
struct Levels {
  double control = 0.0;        // F_{Y|D=0}(q)
  double matched_treated = 0;  // sum_x F_{Y|D=1,X=x}(q) p_{x|D=1}
  double matched_control = 0;  // sum_x F_{Y|D=1,X=x}(q) p_{x|D=0}
};

class MarginalInputs {
 public:
  MarginalInputs(const Sample& sample, const IndifferencePmf& ipmf)
      : ipmf_(ipmf), f_y_(outcome_cdf(sample)),
        f_control_(conditional_ecdf(sample, nullptr, RowPredicate::control())),
        by_cell_(sample.num_levels()) {
    for (std::uint32_t k = 0; k < sample.num_levels(); ++k) {
      const bool needed = (use_treated() && ipmf.treated[k] > 0.0) ||
                          (use_control() && ipmf.control[k] > 0.0);
      if (needed) by_cell_[k] = conditional_ecdf(sample, nullptr, RowPredicate::treated_in_cell(k));
    }
  }

  bool use_treated() const { return ipmf_.alpha > 0.0; }
  bool use_control() const { return ipmf_.alpha < 1.0; }

  Levels at(double tau) const {
    const double q = f_y_.quantile(tau).value();
    Levels lv;
    lv.control = f_control_.eval(q);
    std::vector<double> t1, t0;
    for (std::size_t k = 0; k < by_cell_.size(); ++k) {
      if (by_cell_[k].empty()) continue;
      const double level = by_cell_[k].eval(q);
      if (use_treated()) t1.push_back(level * ipmf_.treated[k]);
      if (use_control()) t0.push_back(level * ipmf_.control[k]);
    }
    lv.matched_treated = compensated_sum(t1);
    lv.matched_control = compensated_sum(t0);
    return lv;
  }

  // alpha-combination of the two endpoint frontiers.
  double frontier(const Levels& lv) const {
    const double a = ipmf_.alpha;
    const double upper = use_treated() ? a * (lv.matched_treated - lv.control) : 0.0;
    const double lower = use_control() ? (1.0 - a) * (lv.matched_control - lv.control) : 0.0;
    return upper + lower;
  }

  double integral(const Levels& lv) const {
    const double a = ipmf_.alpha;
    const double upper = use_treated() ? a * lv.matched_treated : 0.0;
    const double lower = use_control() ? (1.0 - a) * lv.matched_control : 0.0;
    return upper + lower;
  }

 private:
  const IndifferencePmf& ipmf_;
  StepCdf f_y_;
  StepCdf f_control_;
  std::vector<StepCdf> by_cell_;
};

}  // namespace

IndifferencePmf indifference_pmf(const Sample& sample, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1]");
  std::vector<std::uint8_t> treated(sample.d().begin(), sample.d().end());
  std::vector<std::uint8_t> control(sample.n());
  for (std::size_t i = 0; i < sample.n(); ++i) control[i] = sample.d()[i] == 0 ? 1 : 0;

  IndifferencePmf out;
  out.alpha = alpha;
  out.treated = pmf_from_rows(sample, treated);
  out.control = pmf_from_rows(sample, control);
  out.atoms.keys = out.treated.keys;
  out.atoms.probs.resize(out.treated.size());
  for (std::size_t k = 0; k < out.atoms.size(); ++k)
    out.atoms.probs[k] = alpha * out.treated[k] + (1.0 - alpha) * out.control[k];
  return out;
}

FrontierCurve marginal_frontier(const Sample& sample, const IndifferencePmf& ipmf,
                           std::span<const double> taus) {
  MarginalInputs inputs(sample, ipmf);
  FrontierCurve out;
  out.side = Side::UpperConclusion;
  out.g = 0.0;
  out.taus.assign(taus.begin(), taus.end());
  for (double tau : taus) {
    check_unit_tau(tau);
    const double c = inputs.frontier(inputs.at(tau));
    out.c_values.push_back(c);
    out.clamped.push_back(clamp_unit(c));
  }
  return out;
}

FrontierCurve marginal_frontier_general(const Sample& sample, const IndifferencePmf& ipmf,
                                   std::span<const double> taus, double m,
                                   std::span<const double> density) {
  if (density.size() != taus.size())
    throw Error(ErrorCode::InvalidConfig, "one density value per tau is required");
  auto out = marginal_frontier(sample, ipmf, taus);
  out.g = m;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    out.c_values[i] = out.c_values[i] + density[i] * m;
    out.clamped[i] = clamp_unit(out.c_values[i]);
  }
  return out;
}

double silverman_bandwidth(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  if (values.size() < 2) throw Error(ErrorCode::TooFewRows, "bandwidth needs at least two values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) throw Error(ErrorCode::DegenerateOutcome, "all outcome values are equal");
  return 1.06 * sd * std::pow(n, -0.2);
}

KernelDensity::KernelDensity(std::span<const double> values, std::optional<double> bandwidth)
    : values_(values.begin(), values.end()) {
  if (values_.empty()) throw Error(ErrorCode::EmptyInput, "density needs at least one value");
  if (bandwidth) {
    if (!(*bandwidth > 0.0)) throw Error(ErrorCode::BandwidthNonpositive, "bandwidth must be positive");
    bandwidth_ = *bandwidth;
  } else {
    bandwidth_ = silverman_bandwidth(values_);
  }
  std::sort(values_.begin(), values_.end());
}

double KernelDensity::operator()(double y) const {
  // Contributions beyond 9 bandwidths are below 1e-17 relative and skipped.
  const double reach = 9.0 * bandwidth_;
  auto first = std::lower_bound(values_.begin(), values_.end(), y - reach);
  auto last = std::upper_bound(first, values_.end(), y + reach);
  double sum = 0.0;
  for (auto it = first; it != last; ++it) {
    const double u = (y - *it) / bandwidth_;
    sum += std::exp(-0.5 * u * u);
  }
  return sum * std::numbers::inv_sqrtpi / std::numbers::sqrt2 /
         (static_cast<double>(values_.size()) * bandwidth_);
}

double density_at_quantile(const Sample& sample, double tau, std::optional<double> bandwidth) {
  check_unit_tau(tau);
  if (bandwidth && !(*bandwidth > 0.0))
    throw Error(ErrorCode::BandwidthNonpositive, "bandwidth must be positive");
  if (sample.n() < 10) throw Error(ErrorCode::TooFewRows, "density estimation needs n >= 10");
  auto [lo, hi] = std::minmax_element(sample.y().begin(), sample.y().end());
  if (*lo == *hi) throw Error(ErrorCode::DegenerateOutcome, "all outcome values are equal");
  KernelDensity kde(sample.y(), bandwidth);
  const double q = outcome_cdf(sample).quantile(tau).value();
  return kde(q);
}

MarginalBounds marginal_effect_bounds(const Sample& sample, const IndifferencePmf& ipmf,
                                      double tau, double c, double density) {
  check_unit_tau(tau);
  if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::COutOfRange, "c must lie in [0, 1]");
  if (!(density > 0.0)) throw Error(ErrorCode::ZeroDensity, "density at the quantile must be positive");
  MarginalInputs inputs(sample, ipmf);
  const Levels lv = inputs.at(tau);
  const double f0 = lv.control;
  const double integral = inputs.integral(lv);
  MarginalBounds out;
  out.lower = std::max((f0 - 1.0) / density, (f0 - integral - c) / density);
  out.upper = std::min(f0 / density, (f0 - integral + c) / density);
  out.misspecification_risk = ipmf.alpha != 1.0;
  return out;
}

}  // namespace qbf
