#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "roughmetrics/metric_space.hpp"

namespace roughmetrics {

/// Feasibility slack used by every SRA(alpha) decision in the library.
inline constexpr double sra_tolerance = 1e-12;

struct TripleRow {
  Triple t; // i < j < k
  double required_alpha = 0.0;
};

struct SraReport {
  double required_alpha = 0.0;
  Triple argmax; // endpoints (i, j), middle k
  std::vector<TripleRow> table;
};

SraReport sra_required_alpha(const FiniteMetricSpace& space, bool with_table = false);

struct SraCheck {
  bool passed = true;
  std::optional<Triple> violation; // first offending triple, lexicographic
  double violation_alpha = 0.0;
};

/// SRA(alpha) decision: required alpha <= alpha + tol.
SraCheck sra_check(const FiniteMetricSpace& space, double alpha, double tol = sra_tolerance);

bool is_ultrametric(const FiniteMetricSpace& space, double tol = sra_tolerance);

/// Value of a closed form, with `limit` set when the argument sits on an
/// excluded endpoint and the value is the one-sided limit.
struct FlaggedValue {
  double value = 0.0;
  bool limit = false;
};

/// 2^alpha - 1, the SRA parameter of an alpha-snowflake. alpha in (0, 1].
double snowflake_sra_parameter(double alpha);

struct UncPair {
  Index i = 0;
  Index j = 0;
  bool feasible = true;
  double lambda = 0.0; // witness ratio when feasible
  std::vector<std::pair<double, double>> blocking; // closed blocked ranges when infeasible
};

struct UncReport {
  bool passed = true;
  std::vector<UncPair> pairs;
};

/// delta-UNC test: for every pair (x, y) some lambda in (delta, 1 - delta)
/// leaves B(x, (lambda+delta)D) and B(y, (1-lambda+delta)D) disjoint.
UncReport unc_check(const FiniteMetricSpace& space, double delta);

/// delta(alpha) = (1 - alpha) / (2 (1 + alpha)).
FlaggedValue unc_delta_from_sra(double alpha);

/// q(alpha) = log 2 / log(1 + 2 alpha / (1 + alpha^2)).
FlaggedValue snowflake_exponent_q(double alpha);

/// q_TW(delta) = log 2 / (log 2 - log(1 + 4 delta^2)).
FlaggedValue tw_exponent_q(double delta);

struct EfBounds {
  FlaggedValue lower; // limit flag marks overflow to +inf
  FlaggedValue upper;
};

/// Cardinality bounds for SRA(alpha) subsets of R^n.
EfBounds ef_bounds(int n, double alpha);

} // namespace roughmetrics
