#pragma once

#include <memory>
#include <vector>

#include "roughmetrics/metric_space.hpp"

namespace roughmetrics {

/// A total order on (a subset of) the points of a space. Positions are
/// 0-based; `order[t]` is the point index at position t.
class OrderedSet {
public:
  OrderedSet() = default;
  /// Throws StructuralError on out-of-range, repeated or coincident points.
  OrderedSet(std::shared_ptr<const FiniteMetricSpace> space, std::vector<Index> order);
  /// All points of `space` in index order.
  static OrderedSet identity(FiniteMetricSpace space);

  Index size() const { return static_cast<Index>(order_.size()); }
  const FiniteMetricSpace& space() const { return *space_; }
  std::shared_ptr<const FiniteMetricSpace> space_ptr() const { return space_; }
  const std::vector<Index>& order() const { return order_; }

  /// Distance between positions a and b.
  double operator()(Index a, Index b) const { return d_(a, b); }
  /// Distances indexed by position.
  const Eigen::MatrixXd& matrix() const { return d_; }

  OrderedSet reversed() const;
  /// Restriction to the given positions (strictly increasing).
  OrderedSet restrict(const std::vector<Index>& positions) const;
  /// The restriction as a stand-alone matrix space, in order.
  FiniteMetricSpace as_space() const;

private:
  std::shared_ptr<const FiniteMetricSpace> space_;
  std::vector<Index> order_;
  Eigen::MatrixXd d_;
};

/// Least lambda in [-1, 1] making S rough lambda-self-contracting
/// (-1 when |S| < 3).
double lambda_required_contracting(const OrderedSet& s);

/// Same for self-expanding; equals the contracting value of the reversal.
double lambda_required_expanding(const OrderedSet& s);

/// Least theta with d(x1,x3) <= d(x1,x2) + theta d(x2,x3) on ordered triples.
double medial_theta_required(const OrderedSet& s);

/// Least M with diam(arc[x, y]) <= M d(x, y) over position pairs.
double bounded_turning_constant(const OrderedSet& s);

/// Bounded turning constant guaranteed for rough lambda-self-expanding sets.
double m_lambda(double lambda);

/// Sum of consecutive distances.
double discrete_length(const OrderedSet& s);

/// Distance between the first and last points.
double discrete_diameter(const OrderedSet& s);

struct ElementaryCheck {
  bool preconditions_met = false;
  double contracting = 0.0;
  double expanding = 0.0;
  double medial = 0.0;
  bool sra_holds = false; // SRA(lambda) of the underlying point set
};

/// Both-sided self-monotone plus medial condition at level lambda imply
/// SRA(lambda); reports the hypotheses and the SRA outcome.
ElementaryCheck elementary_combination_check(const OrderedSet& s, double lambda);

} // namespace roughmetrics
