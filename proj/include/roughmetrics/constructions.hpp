#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughmetrics/metric_space.hpp"

namespace roughmetrics {

// ---- geometric sequences and Cantor sets -----------------------------------

/// Root a in (0, 1) of (1 - x)^alpha + eps x^alpha - 1, found by bisection.
/// Requires 0 < eps < 1 and 0 < alpha < 1.
double solve_root_a(double eps, double alpha);

/// Points a^1, ..., a^count with metric |x - y|^alpha.
FiniteMetricSpace geometric_sra_sequence(double eps, double alpha, int count);

/// ((1 - a)^alpha - (1 - 2a)^alpha) / a^alpha, for 0 < a < 1/2.
double eps_prime(double alpha, double a);

/// Endpoints of the level-`level` intervals of the two-map Cantor set
/// x -> a x, x -> 1 - a + a x; ascending, 2^(level+1) values.
std::vector<double> cantor_endpoints(double a, int level);

/// cantor_endpoints(solve_root_a(eps, alpha), level) under |x - y|^alpha.
/// Requires eps < 2^alpha - 1.
FiniteMetricSpace cantor_approx(double alpha, double eps, int level);

// ---- Laakso-type ultrametrics ----------------------------------------------

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Exact distance between words v, w of F_m (bit m-1 is the first letter).
Rational laakso_distance(int m, std::uint64_t v, std::uint64_t w);

/// F_m: binary words of length m, 1 <= m <= 10.
FiniteMetricSpace laakso_level(int m);

/// Two copies of F_m at constant distance max(|q' - q|, diam F_m).
FiniteMetricSpace laakso_doubled(int m, double q = 6.0 / 16.0, double q_prime = 10.0 / 16.0);

// ---- metric tree -----------------------------------------------------------

/// Segment 0 is the horizontal segment, with param the abscissa in [0, t_1].
/// Segment k >= 1 joins (t_k, 0) to (t_k, t_k); param y in [0, 1] is the
/// height fraction, the apex p_k having y = 1.
struct TreePoint {
  int segment = 0;
  double param = 0.0;
};

/// Intrinsic distance in the tree built on t (t_1 = t[0]).
double tree_distance(std::span<const double> t, const TreePoint& p, const TreePoint& q);

struct MetricTreeSample {
  FiniteMetricSpace space;
  std::vector<TreePoint> points;
  std::vector<Index> apex; // index of p_k for k = 1..|t|
};

/// Samples: s+1 points on the horizontal segment and s points per vertical
/// segment (heights j/s, j = 1..s). s = 0 keeps only the apexes.
MetricTreeSample metric_tree(std::vector<double> t, int samples_per_segment);

// ---- sequences in Hilbert space and the Heisenberg group -------------------

/// Points c_k e_k, c strictly decreasing and positive.
FiniteMetricSpace hilbert_sequence(std::vector<double> c);

/// Vertical axis of the Heisenberg group: c |s - t|^(1/2).
FiniteMetricSpace heisenberg_axis(std::vector<double> ts, double c = 1.0);

// ---- power-metric counterexamples ------------------------------------------

/// Triangles with sides (1, delta_m, 1 + beta delta_m), mutually at distance 2.
/// Point order x_1, y_1, z_1, x_2, ...
FiniteMetricSpace no_converse_family(double beta, std::span<const double> deltas, int m_count);

/// First m (1-based) with (1 + beta delta_m)^q > 1 + delta_m^q, if any.
std::optional<int> no_converse_first_violation(double beta, std::span<const double> deltas,
                                               double q);

/// True when the triangle (1, delta, 1 + alpha delta) breaks the triangle
/// inequality after raising distances to the power q.
bool power_triangle_violation(double alpha, double delta, double q);

/// The five lower bounds on R for the Hilbert triangle construction.
std::array<double, 5> r_restrictions(double alpha);

/// Largest of r_restrictions; alpha in (1/sqrt 2, 1).
double r_min(double alpha);

/// x_m = R e_{2m-1}, y_m = x_m + e_{2m}, z_m = x_m + delta_m w_m in
/// R^(2 m_count), point order x_1, y_1, z_1, x_2, ...
FiniteMetricSpace hilbert_triangles(double alpha, double R, int m_count,
                                    std::span<const double> deltas);

// ---- doubling space and simplex --------------------------------------------

/// Distance between (x, m) and (y, n) in the level-indexed dyadic space.
double dyadic_distance(double x, int m, double y, int n);

/// Points (k / resolution, n) for every level n and k < resolution.
FiniteMetricSpace dyadic_doubling_space(std::span<const int> levels, int resolution);

/// Unit-side regular n-simplex together with its circumcenter (last point).
FiniteMetricSpace simplex_with_center(int n);

// ---- named families --------------------------------------------------------

struct ConstructionSpec {
  std::string family;
  nlohmann::json params = nlohmann::json::object();
};

/// Builds a family by name; the result keeps the ConstructionSpec as its source.
FiniteMetricSpace build(const ConstructionSpec& spec);

const std::vector<std::string>& family_names();

} // namespace roughmetrics
