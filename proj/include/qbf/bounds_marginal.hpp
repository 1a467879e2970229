#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qbf/bounds_global.hpp"
#include "qbf/core_data.hpp"
#include "qbf/ecdf.hpp"

namespace qbf {

/// Covariate distribution at the indifference margin, taken as the mixture
/// alpha * p_{x|D=1} + (1 - alpha) * p_{x|D=0}. The two endpoint pmfs are
/// kept so frontier values can be formed as the same convex combination.
struct IndifferencePmf {
  double alpha = 1.0;
  StepPmf atoms;
  StepPmf treated;
  StepPmf control;
};

IndifferencePmf indifference_pmf(const Sample& sample, double alpha);

/// Frontier for the conclusion "marginal effect <= 0":
///   c^M(tau) = sum_x F_{Y|D=1,X=x}(q) p_{x|dD} - F_{Y|D=0}(q),  q = F_Y^-1(tau).
/// No density appears. Side is UpperConclusion.
FrontierCurve marginal_frontier(const Sample& sample, const IndifferencePmf& ipmf,
                           std::span<const double> taus);

/// Frontier for "marginal effect <= m": c^M(tau) + f_Y(q) * m.
FrontierCurve marginal_frontier_general(const Sample& sample, const IndifferencePmf& ipmf,
                                   std::span<const double> taus, double m,
                                   std::span<const double> density);

/// Gaussian kernel density estimate of the outcome.
class KernelDensity {
 public:
  /// Bandwidth defaults to Silverman's rule 1.06 * sd * n^(-1/5).
  explicit KernelDensity(std::span<const double> values,
                         std::optional<double> bandwidth = std::nullopt);

  double bandwidth() const noexcept { return bandwidth_; }
  double operator()(double y) const;

 private:
  std::vector<double> values_;
  double bandwidth_ = 0.0;
};

/// Silverman bandwidth; throws DEGENERATE_OUTCOME when all values coincide.
double silverman_bandwidth(std::span<const double> values);

/// f_Y evaluated at the empirical tau-quantile of y.
double density_at_quantile(const Sample& sample, double tau,
                           std::optional<double> bandwidth = std::nullopt);

struct MarginalBounds {
  double lower = 0.0;
  double upper = 0.0;
  /// Set whenever alpha != 1: the margin's covariate law is a modelling choice.
  bool misspecification_risk = false;
};

/// theta_L = max{(F0(q) - 1)/f, (F0(q) - I(q) - c)/f}
/// theta_U = min{F0(q)/f,       (F0(q) - I(q) + c)/f}
/// with I(q) = sum_x F_{Y|D=1,X=x}(q) p_{x|dD} and f = f_Y(q).
MarginalBounds marginal_effect_bounds(const Sample& sample, const IndifferencePmf& ipmf,
                                      double tau, double c, double density);

}  // namespace qbf
