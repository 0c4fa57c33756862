#include "roughmetrics/sra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "roughmetrics/error.hpp"

namespace roughmetrics {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

SraReport sra_required_alpha(const FiniteMetricSpace& space, bool with_table) {
  SraReport r;
  const Eigen::MatrixXd& d = space.matrix();
  const Index n = space.size();
  bool first = true;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      for (Index c = b + 1; c < n; ++c) {
        Triple roles;
        const double v = triple_required_alpha(d, a, b, c, &roles);
        if (with_table)
          r.table.push_back({{a, b, c}, v});
        if (first || v > r.required_alpha) {
          r.required_alpha = v;
          r.argmax = roles;
          first = false;
        }
      }
  return r;
}

SraCheck sra_check(const FiniteMetricSpace& space, double alpha, double tol) {
  if (!(alpha >= 0.0))
    throw DomainError("SRA parameter must be non-negative");
  const Eigen::MatrixXd& d = space.matrix();
  const Index n = space.size();
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      for (Index c = b + 1; c < n; ++c) {
        Triple roles;
        const double v = triple_required_alpha(d, a, b, c, &roles);
        if (v > alpha + tol)
          return {false, roles, v};
      }
  return {};
}

bool is_ultrametric(const FiniteMetricSpace& space, double tol) {
  return sra_check(space, 0.0, tol).passed;
}

double snowflake_sra_parameter(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("snowflake exponent must lie in (0, 1]");
  return std::exp2(alpha) - 1.0;
}

UncReport unc_check(const FiniteMetricSpace& space, double delta) {
  if (!(delta > 0.0 && delta < 0.5))
    throw DomainError("UNC delta must lie in (0, 1/2)");
  UncReport r;
  const Index n = space.size();
  const double lo_end = delta;
  const double hi_end = 1.0 - delta;
  std::vector<std::pair<double, double>> blocks;
  for (Index x = 0; x < n; ++x)
    for (Index y = x + 1; y < n; ++y) {
      const double D = space(x, y);
      blocks.clear();
      for (Index z = 0; z < n; ++z) {
        if (z == x || z == y)
          continue;
        const double lo = space(x, z) / D - delta;
        const double hi = 1.0 + delta - space(y, z) / D;
        if (lo <= hi && hi > lo_end && lo < hi_end)
          blocks.emplace_back(lo, hi);
      }
      std::sort(blocks.begin(), blocks.end());
      // sweep the open window (delta, 1 - delta) for the widest free gap
      double best_len = -1.0;
      double best_mid = 0.0;
      double cursor = lo_end;
      auto consider = [&](double a, double b) {
        if (b - a > best_len) {
          best_len = b - a;
          best_mid = 0.5 * (a + b);
        }
      };
      for (const auto& [lo, hi] : blocks) {
        if (lo > cursor)
          consider(cursor, std::min(lo, hi_end));
        cursor = std::max(cursor, hi);
        if (cursor >= hi_end)
          break;
      }
      if (cursor < hi_end)
        consider(cursor, hi_end);
      UncPair p{x, y, best_len > sra_tolerance, 0.0, {}};
      if (p.feasible) {
        p.lambda = best_mid;
      } else {
        p.blocking = blocks;
        r.passed = false;
      }
      r.pairs.push_back(std::move(p));
    }
  return r;
}

FlaggedValue unc_delta_from_sra(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("alpha must lie in [0, 1]");
  return {0.5 * (1.0 - alpha) / (1.0 + alpha), alpha == 0.0 || alpha == 1.0};
}

FlaggedValue snowflake_exponent_q(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("alpha must lie in [0, 1]");
  if (alpha == 0.0)
    return {inf, true};
  return {std::numbers::ln2 / std::log1p(2.0 * alpha / (1.0 + alpha * alpha)), false};
}

FlaggedValue tw_exponent_q(double delta) {
  if (!(delta >= 0.0 && delta <= 0.5))
    throw DomainError("delta must lie in [0, 1/2]");
  if (delta == 0.5)
    return {inf, true};
  return {std::numbers::ln2 / (std::numbers::ln2 - std::log1p(4.0 * delta * delta)), delta == 0.0};
}

EfBounds ef_bounds(int n, double alpha) {
  if (n < 1)
    throw DomainError("dimension must be at least 1");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in [0, 1)");
  const double gap = std::acos(alpha); // pi - beta
  auto bound = [&](double ratio) -> FlaggedValue {
    const double e = std::pow(ratio, n - 1);
    const double v = std::exp2(e);
    if (!std::isfinite(v))
      return {inf, true};
    return {v, false};
  };
  return {bound(std::numbers::pi / gap), bound(4.0 * std::numbers::pi / gap)};
}

} // namespace roughmetrics
