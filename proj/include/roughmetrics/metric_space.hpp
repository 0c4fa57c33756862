#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "roughmetrics/kernels.hpp"

namespace roughmetrics {

enum class Norm { euclidean, taxicab };

const char* to_string(Norm n);
Norm norm_from_string(const std::string& s);

/// Norm of a row vector expression.
template <typename Derived>
typename Derived::Scalar norm_of(const Eigen::MatrixBase<Derived>& v, Norm n) {
  return n == Norm::taxicab ? v.template lpNorm<1>() : v.norm();
}

class FiniteMetricSpace;

struct MatrixSource {};

struct CoordinateSource {
  Eigen::MatrixXd coords; // one point per row
  Norm norm = Norm::euclidean;
};

/// d^alpha over `base`. The base is never itself a snowflake: nested
/// snowflakes are collapsed by multiplying exponents.
struct SnowflakeSource {
  std::shared_ptr<const FiniteMetricSpace> base;
  double alpha = 1.0;
};

/// Built by a named family of the constructions module.
struct ConstructionSource {
  std::string family;
  nlohmann::json params;
};

using SpaceSource = std::variant<MatrixSource, CoordinateSource, SnowflakeSource, ConstructionSource>;

/// A finite set of labeled points with a cached distance matrix.
///
/// Construction only rejects structurally broken data (shape, sign, NaN);
/// the metric axioms are checked by validate().
class FiniteMetricSpace {
public:
  FiniteMetricSpace() = default;
  explicit FiniteMetricSpace(Eigen::MatrixXd distances, std::vector<std::string> labels = {},
                             std::string name = {}, SpaceSource source = MatrixSource{});

  static FiniteMetricSpace from_coordinates(Eigen::MatrixXd coords, Norm norm,
                                            std::vector<std::string> labels = {},
                                            std::string name = {});

  Index size() const { return d_.rows(); }
  double operator()(Index i, Index j) const { return d_(i, j); }
  const Eigen::MatrixXd& matrix() const { return d_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& name() const { return name_; }
  const SpaceSource& source() const { return source_; }

  /// "matrix", "euclidean", "taxicab", "snowflake" or "construction".
  std::string kind() const;

  /// Restriction to `indices`, in that order. Always matrix-sourced.
  FiniteMetricSpace subspace(std::span<const Index> indices) const;

  FiniteMetricSpace renamed(std::string name) const;

private:
  Eigen::MatrixXd d_;
  std::vector<std::string> labels_;
  std::string name_;
  SpaceSource source_;
};

/// Pairwise distance matrix of the rows of `coords`.
Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& coords, Norm norm);

enum class ViolationKind { identity, symmetry, positivity, triangle };

const char* to_string(ViolationKind k);

/// For triangle violations (i, j) is the long side and k the detour point;
/// pair violations leave k = -1.
struct Violation {
  ViolationKind kind;
  Triple where;
  double residual = 0.0;
};

struct ValidationReport {
  bool passed = true;
  std::vector<Violation> violations;
};

/// Checks the metric axioms with relative tolerance `tol`.
ValidationReport validate(const Eigen::MatrixXd& d, double tol = 1e-9);
ValidationReport validate(const FiniteMetricSpace& space, double tol = 1e-9);

/// Throws MetricViolation describing the first violation, if any.
void require_metric(const FiniteMetricSpace& space, double tol = 1e-9);

/// (X, d^alpha), alpha in (0, 1].
FiniteMetricSpace snowflake(const FiniteMetricSpace& space, double alpha);

struct LpReport {
  double exponent = 0.0; // +inf when unbounded (or above the bisection cap)
  Triple argmin;         // triple attaining the infimum, -1s when none
};

/// Infimum over triples of the exponent p making the triangle an L^p triangle.
LpReport max_lp_exponent(const FiniteMetricSpace& space);

struct ComparisonAngles {
  std::array<double, 3> at{}; // angle at the first, second and third index
  bool degenerate = false;    // collinear triple
};

/// Euclidean comparison triangle angles of (i, j, k).
ComparisonAngles comparison_angles(const FiniteMetricSpace& space, Index i, Index j, Index k);

struct DoublingRow {
  double radius = 0.0;
  Index count = 0;  // largest greedy r/2-separated subset of a closed r-ball
  Index center = -1;
};

/// Greedy packing counts in closed balls B(x, r), maximized over centers.
/// Points at distance >= r/2 count as separated.
std::vector<DoublingRow> doubling_probe(const FiniteMetricSpace& space,
                                        std::span<const double> radii);

} // namespace roughmetrics
