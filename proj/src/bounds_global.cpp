#include "qbf/bounds_global.hpp"

#include <algorithm>
#include <sstream>

#include "qbf/error.hpp"

namespace qbf {

void check_tau(double tau, double delta) {
  if (!(tau > delta && tau < 1.0 - delta)) {
    std::ostringstream os;
    os << "tau=" << tau << " must lie in (" << delta << ", " << 1.0 - delta << ")";
    throw Error(ErrorCode::TauOutOfRange, os.str());
  }
}

StepCdf outcome_cdf(const Sample& sample) { return ecdf_from_values(sample.y(), 1.0); }

ApparentPair apparent_pair(const Sample& sample, const PolicyAssignment& assignment) {
  if (assignment.d_delta.size() != sample.n())
    throw Error(ErrorCode::LengthMismatch, "assignment length differs from sample size");
  const double delta = assignment.delta;
  check_delta(sample, delta);
  const double p_hat = sample.treated_share();

  std::vector<std::uint8_t> newly(sample.n(), 0);
  std::size_t newly_count = 0;
  for (std::size_t i = 0; i < sample.n(); ++i) {
    if (sample.d()[i] == 0 && assignment.d_delta[i] == 1) {
      newly[i] = 1;
      ++newly_count;
    }
  }
  if (newly_count == 0)
    throw Error(ErrorCode::NoNewlyTreated, "the policy assignment shifts no control rows");

  const StepPmf p_x = pmf_from_rows(sample, newly);
  const StepCdf f_treated = conditional_ecdf(sample, nullptr, RowPredicate::treated());
  const StepCdf f_untreated =
      conditional_ecdf(sample, &assignment, RowPredicate::policy_untreated());

  std::vector<StepCdf> by_cell(p_x.size());
  std::vector<std::pair<const StepCdf*, double>> matched;
  for (std::uint32_t k = 0; k < p_x.size(); ++k) {
    if (p_x[k] <= 0.0) continue;
    by_cell[k] = conditional_ecdf(sample, nullptr, RowPredicate::treated_in_cell(k));
    matched.emplace_back(&by_cell[k], p_x[k]);
  }
  const StepCdf newly_proxy = mixture_cdf(matched);

  ApparentPair pair;
  pair.delta = delta;
  pair.p_hat = p_hat;
  pair.f_a_tilde = mixture_cdf({{&f_treated, p_hat}, {&f_untreated, 1.0 - p_hat - delta}});
  pair.f_a = mixture_cdf({{&pair.f_a_tilde, 1.0}, {&newly_proxy, delta}});
  return pair;
}

EffectBounds global_effect_bounds(const ApparentPair& pair, const StepCdf& f_y, double tau,
                                  double c) {
  check_tau(tau, pair.delta);
  if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::COutOfRange, "c must lie in [0, 1]");
  const double delta = pair.delta;
  const double q = f_y.quantile(tau).value();
  const ExtendedReal lo = std::max(pair.f_a_tilde.quantile(tau - delta),
                                   pair.f_a.quantile(tau - delta * c));
  const ExtendedReal hi = std::min(pair.f_a_tilde.quantile(tau), pair.f_a.quantile(tau + delta * c));
  return {lo - q, hi - q};
}

BoundsCurve global_bounds_curve(const ApparentPair& pair, const StepCdf& f_y,
                                std::span<const double> taus, double c) {
  BoundsCurve curve;
  curve.c = c;
  curve.taus.assign(taus.begin(), taus.end());
  curve.lower.reserve(taus.size());
  curve.upper.reserve(taus.size());
  for (double tau : taus) {
    auto b = global_effect_bounds(pair, f_y, tau, c);
    curve.lower.push_back(b.lower);
    curve.upper.push_back(b.upper);
  }
  return curve;
}

FrontierCurve breakdown_frontier(const ApparentPair& pair, const StepCdf& f_y, std::span<const double> taus,
                  std::span<const double> g, Side side) {
  if (g.size() != taus.size())
    throw Error(ErrorCode::InvalidConfig, "threshold sequence must match the tau grid");
  FrontierCurve out;
  out.side = side;
  out.g = g.empty() ? 0.0 : g.front();
  out.taus.assign(taus.begin(), taus.end());
  out.c_values.reserve(taus.size());
  out.clamped.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double tau = taus[i];
    check_tau(tau, pair.delta);
    const double q = f_y.quantile(tau).value();
    const double level = pair.f_a.eval(q + g[i]);
    const double c = side == Side::LowerConclusion ? (tau - level) / pair.delta
                                                   : (level - tau) / pair.delta;
    out.c_values.push_back(c);
    out.clamped.push_back(clamp_unit(c));
  }
  return out;
}

FrontierCurve breakdown_frontier(const ApparentPair& pair, const StepCdf& f_y, std::span<const double> taus,
                  double g, Side side) {
  std::vector<double> gs(taus.size(), g);
  auto out = breakdown_frontier(pair, f_y, taus, gs, side);
  out.g = g;
  return out;
}

DerivedBounds derived_bounds(const ApparentPair& pair, const StepCdf& f_y, double tau_star,
                             double g, std::span<const double> taus) {
  check_tau(tau_star, pair.delta);
  const double star[] = {tau_star};
  const auto frontier = breakdown_frontier(pair, f_y, star, g, Side::LowerConclusion);
  DerivedBounds out;
  out.c_raw = frontier.c_values.front();
  out.c_clamped = frontier.clamped.front();
  out.curve = global_bounds_curve(pair, f_y, taus, out.c_clamped);
  return out;
}

Sharpness sharpness_diagnostic(const ApparentPair& pair, const StepCdf& /*f_y*/, double tau,
                               double c_frontier) {
  check_tau(tau, pair.delta);
  const ExtendedReal incomplete = pair.f_a_tilde.quantile(tau - pair.delta);
  const ExtendedReal apparent = pair.f_a.quantile(tau - pair.delta * c_frontier);
  return incomplete >= apparent ? Sharpness::Slack : Sharpness::Binding;
}

std::vector<double> frontier_slope_diagnostics(const FrontierCurve& frontier,
                                               const ApparentPair& pair, const StepCdf& f_y,
                                               double dg) {
  if (!(dg > 0.0)) throw Error(ErrorCode::InvalidConfig, "dg must be positive");
  const auto shifted = breakdown_frontier(pair, f_y, frontier.taus, frontier.g + dg, frontier.side);
  std::vector<double> slopes(frontier.taus.size());
  for (std::size_t i = 0; i < slopes.size(); ++i)
    slopes[i] = (shifted.c_values[i] - frontier.c_values[i]) / dg;
  return slopes;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  grid.back() = hi;
  return grid;
}

std::vector<double> default_tau_grid(double delta) {
  const double lo = std::max(delta + 0.01, 0.15);
  const double hi = std::min(1.0 - delta - 0.01, 0.85);
  if (!(lo < hi)) throw Error(ErrorCode::DeltaOutOfRange, "delta leaves no admissible tau range");
  return linear_grid(lo, hi, 71);
}

}  // namespace qbf
