// Reference bounds computed from raw row counts. Shares no computation with
// the step-function machinery: every CDF value is a fresh count over all rows
// and every inverse is a linear scan over the sorted outcome values.

#include <algorithm>
#include <limits>
#include <vector>

#include "qbf/error.hpp"
#include "qbf/synthetic.hpp"

namespace qbf {

namespace {

constexpr double kTieSlack = 1e-12;  // same tie convention as the main inverse
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Counts {
  const Sample& s;
  const PolicyAssignment& a;

  double share(bool (*pick)(const Counts&, std::size_t, std::uint32_t), double y,
               std::uint32_t cell = 0) const {
    double hit = 0.0, total = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) {
      if (!pick(*this, i, cell)) continue;
      total += 1.0;
      if (s.y()[i] <= y) hit += 1.0;
    }
    return hit / total;
  }
};

bool treated(const Counts& c, std::size_t i, std::uint32_t) { return c.s.d()[i] == 1; }
bool untreated_under_policy(const Counts& c, std::size_t i, std::uint32_t) {
  return c.a.d_delta[i] == 0;
}
bool treated_in(const Counts& c, std::size_t i, std::uint32_t k) {
  return c.s.d()[i] == 1 && c.s.cells()[i] == k;
}

}  // namespace

EffectBounds brute_force_bounds(const Sample& sample, const PolicyAssignment& assignment, double tau,
                                double c) {
  const std::size_t n = sample.n();
  if (n > 200) throw Error(ErrorCode::InvalidConfig, "brute-force bounds are limited to n <= 200");
  const double delta = assignment.delta;
  if (!(tau > delta && tau < 1.0 - delta)) throw Error(ErrorCode::TauOutOfRange, "tau outside (delta, 1-delta)");
  if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::COutOfRange, "c outside [0, 1]");

  double n1 = 0.0, n_untreated = 0.0, n_newly = 0.0;
  std::vector<double> newly_in_cell(sample.num_levels(), 0.0);
  std::vector<double> treated_in_cell(sample.num_levels(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (sample.d()[i] == 1) {
      n1 += 1.0;
      treated_in_cell[sample.cells()[i]] += 1.0;
    }
    if (assignment.d_delta[i] == 0) n_untreated += 1.0;
    if (sample.d()[i] == 0 && assignment.d_delta[i] == 1) {
      n_newly += 1.0;
      newly_in_cell[sample.cells()[i]] += 1.0;
    }
  }
  const double p = n1 / static_cast<double>(n);
  if (!(delta > 0.0 && delta < 1.0 - p)) throw Error(ErrorCode::DeltaOutOfRange, "delta outside (0, 1-p)");
  if (n_newly == 0.0) throw Error(ErrorCode::NoNewlyTreated, "no newly treated rows");
  if (n1 == 0.0 || n_untreated == 0.0) throw Error(ErrorCode::EmptyCell, "empty treatment group");
  for (std::size_t k = 0; k < newly_in_cell.size(); ++k)
    if (newly_in_cell[k] > 0.0 && treated_in_cell[k] == 0.0)
      throw Error(ErrorCode::EmptyCell, "newly treated cell without treated rows");

  const Counts counts{sample, assignment};
  auto incomplete = [&](double y) {
    return p * counts.share(treated, y) + (1.0 - p - delta) * counts.share(untreated_under_policy, y);
  };
  auto apparent = [&](double y) {
    double matched = 0.0;
    for (std::uint32_t k = 0; k < newly_in_cell.size(); ++k)
      if (newly_in_cell[k] > 0.0) matched += counts.share(treated_in, y, k) * (newly_in_cell[k] / n_newly);
    return incomplete(y) + delta * matched;
  };
  auto marginal = [&](double y) {
    double hit = 0.0;
    for (double v : sample.y())
      if (v <= y) hit += 1.0;
    return hit / static_cast<double>(n);
  };

  std::vector<double> grid(sample.y().begin(), sample.y().end());
  std::sort(grid.begin(), grid.end());
  auto inverse = [&](auto&& cdf, double t) {
    if (t <= 0.0) return -kInf;
    for (double y : grid)
      if (cdf(y) >= t - kTieSlack) return y;
    return kInf;
  };

  const double q = inverse(marginal, tau);
  const double lower = std::max(inverse(incomplete, tau - delta), inverse(apparent, tau - delta * c));
  const double upper = std::min(inverse(incomplete, tau), inverse(apparent, tau + delta * c));
  return {ExtendedReal(lower - q), ExtendedReal(upper - q)};
}

}  // namespace qbf
