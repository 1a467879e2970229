#pragma once

#include <span>
#include <vector>

#include "qbf/core_data.hpp"
#include "qbf/ecdf.hpp"

namespace qbf {

/// Apparent counterfactual distribution F_A (mass 1) and its identified part
/// F~_A (mass 1 - delta), which excludes the newly treated component.
struct ApparentPair {
  StepCdf f_a;
  StepCdf f_a_tilde;
  double delta = 0.0;
  double p_hat = 0.0;
};

/// F~_A = p F_{Y|D=1} + (1-p-delta) F_{Y|D_delta=0}
/// F_A  = F~_A + delta * sum_x F_{Y|D=1,X=x} p_x, p_x = Pr(X=x | D=0, D_delta=1).
///
/// Throws NO_NEWLY_TREATED when the assignment shifts no rows and EMPTY_CELL
/// when a newly treated covariate cell has no treated rows.
ApparentPair apparent_pair(const Sample& sample, const PolicyAssignment& assignment);

/// Marginal outcome ECDF F_Y.
StepCdf outcome_cdf(const Sample& sample);

enum class Side { LowerConclusion, UpperConclusion };

struct EffectBounds {
  ExtendedReal lower;
  ExtendedReal upper;
};

/// Sharp bounds on the global quantile effect for selection bias c:
///   lower = max{F~_A^-1(tau-delta), F_A^-1(tau-delta c)} - F_Y^-1(tau)
///   upper = min{F~_A^-1(tau),       F_A^-1(tau+delta c)} - F_Y^-1(tau)
EffectBounds global_effect_bounds(const ApparentPair& pair, const StepCdf& f_y, double tau,
                                  double c);

struct BoundsCurve {
  std::vector<double> taus;
  std::vector<ExtendedReal> lower;
  std::vector<ExtendedReal> upper;
  double c = 0.0;
};

BoundsCurve global_bounds_curve(const ApparentPair& pair, const StepCdf& f_y,
                                std::span<const double> taus, double c);

struct FrontierCurve {
  std::vector<double> taus;
  std::vector<double> c_values;
  std::vector<double> clamped;
  Side side = Side::LowerConclusion;
  double g = 0.0;
};

inline double clamp_unit(double c) { return c > 1.0 ? 1.0 : (c < 0.0 ? 0.0 : c); }

/// Quantile breakdown frontier for the conclusion G >= g (lower) or G <= g (upper):
///   c_L = (tau - F_A(F_Y^-1(tau) + g)) / delta,   c_U = -c_L.
FrontierCurve breakdown_frontier(const ApparentPair& pair, const StepCdf& f_y, std::span<const double> taus,
                  double g, Side side);

/// Frontier with a tau-varying threshold, one g per grid point.
FrontierCurve breakdown_frontier(const ApparentPair& pair, const StepCdf& f_y, std::span<const double> taus,
                  std::span<const double> g, Side side);

struct DerivedBounds {
  BoundsCurve curve;
  double c_raw = 0.0;      // frontier value at tau*
  double c_clamped = 0.0;  // max(min(c_raw, 1), 0)
};

/// Bounds across the grid evaluated at the clamped frontier value at tau*.
DerivedBounds derived_bounds(const ApparentPair& pair, const StepCdf& f_y, double tau_star,
                             double g, std::span<const double> taus);

enum class Sharpness { Binding, Slack };

/// Slack when F~_A^-1(tau-delta) >= F_A^-1(tau - delta c_frontier): then the
/// lower bound ignores c and the conclusion holds for every c in [0,1].
Sharpness sharpness_diagnostic(const ApparentPair& pair, const StepCdf& f_y, double tau,
                               double c_frontier);

/// Forward differences (c(g+dg) - c(g)) / dg of the raw frontier, per grid point.
std::vector<double> frontier_slope_diagnostics(const FrontierCurve& frontier,
                                               const ApparentPair& pair, const StepCdf& f_y,
                                               double dg);

/// 71-point grid on [max(delta+0.01, 0.15), min(1-delta-0.01, 0.85)].
std::vector<double> default_tau_grid(double delta);

/// `count` equispaced points on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

void check_tau(double tau, double delta);

}  // namespace qbf
