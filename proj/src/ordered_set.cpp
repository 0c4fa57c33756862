#include "roughmetrics/ordered_set.hpp"

#include <algorithm>
#include <sstream>

#include "roughmetrics/error.hpp"
#include "roughmetrics/sra.hpp"

namespace roughmetrics {

OrderedSet::OrderedSet(std::shared_ptr<const FiniteMetricSpace> space, std::vector<Index> order)
    : space_(std::move(space)), order_(std::move(order)) {
  if (!space_)
    throw StructuralError("ordered set without a space");
  const Index n = space_->size();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Index p : order_) {
    if (p < 0 || p >= n)
      throw StructuralError("ordered set index " + std::to_string(p) + " out of range");
    if (seen[static_cast<std::size_t>(p)])
      throw StructuralError("ordered set repeats point " + std::to_string(p));
    seen[static_cast<std::size_t>(p)] = 1;
  }
  const Index m = size();
  d_.resize(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) {
      d_(a, b) = (*space_)(order_[a], order_[b]);
      if (a != b && d_(a, b) == 0.0) {
        std::ostringstream os;
        os << "points " << order_[a] << " and " << order_[b] << " coincide";
        throw StructuralError(os.str());
      }
    }
}

OrderedSet OrderedSet::identity(FiniteMetricSpace space) {
  std::vector<Index> o(static_cast<std::size_t>(space.size()));
  for (std::size_t i = 0; i < o.size(); ++i)
    o[i] = static_cast<Index>(i);
  return OrderedSet(std::make_shared<const FiniteMetricSpace>(std::move(space)), std::move(o));
}

OrderedSet OrderedSet::reversed() const {
  std::vector<Index> o(order_.rbegin(), order_.rend());
  return OrderedSet(space_, std::move(o));
}

OrderedSet OrderedSet::restrict(const std::vector<Index>& positions) const {
  std::vector<Index> o;
  o.reserve(positions.size());
  for (std::size_t t = 0; t < positions.size(); ++t) {
    if (positions[t] < 0 || positions[t] >= size() || (t > 0 && positions[t] <= positions[t - 1]))
      throw DomainError("positions must be strictly increasing and in range");
    o.push_back(order_[static_cast<std::size_t>(positions[t])]);
  }
  return OrderedSet(space_, std::move(o));
}

FiniteMetricSpace OrderedSet::as_space() const { return space_->subspace(order_); }

double lambda_required_contracting(const OrderedSet& s) {
  const Eigen::MatrixXd& d = s.matrix();
  const Index n = s.size();
  double best = -1.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      for (Index c = b + 1; c < n; ++c)
        best = std::max(best, contracting_kernel(d, a, b, c));
  return std::min(best, 1.0);
}

double lambda_required_expanding(const OrderedSet& s) {
  const Eigen::MatrixXd& d = s.matrix();
  const Index n = s.size();
  double best = -1.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      for (Index c = b + 1; c < n; ++c)
        best = std::max(best, expanding_kernel(d, a, b, c));
  return std::min(best, 1.0);
}

double medial_theta_required(const OrderedSet& s) {
  const Eigen::MatrixXd& d = s.matrix();
  const Index n = s.size();
  double best = -1.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      for (Index c = b + 1; c < n; ++c)
        best = std::max(best, medial_kernel(d, a, b, c));
  return best;
}

double bounded_turning_constant(const OrderedSet& s) {
  const Eigen::MatrixXd& d = s.matrix();
  const Index n = s.size();
  if (n < 2)
    throw DomainError("bounded turning needs at least two points");
  double best = 1.0;
  for (Index x = 0; x < n; ++x) {
    double diam = 0.0;
    for (Index y = x + 1; y < n; ++y) {
      for (Index t = x; t < y; ++t)
        diam = std::max(diam, d(t, y));
      best = std::max(best, diam / d(x, y));
    }
  }
  return best;
}

double m_lambda(double lambda) {
  if (!(lambda >= -1.0 && lambda < 1.0))
    throw DomainError("m_lambda needs lambda in [-1, 1)");
  if (lambda < 0.0)
    return 2.0;
  return 2.0 * (1.0 + lambda) / (1.0 - lambda);
}

double discrete_length(const OrderedSet& s) {
  double total = 0.0;
  for (Index t = 0; t + 1 < s.size(); ++t)
    total += s(t, t + 1);
  return total;
}

double discrete_diameter(const OrderedSet& s) {
  if (s.size() < 2)
    return 0.0;
  return s(0, s.size() - 1);
}

ElementaryCheck elementary_combination_check(const OrderedSet& s, double lambda) {
  if (!(lambda >= -1.0 && lambda <= 1.0))
    throw DomainError("lambda must lie in [-1, 1]");
  ElementaryCheck r;
  r.contracting = lambda_required_contracting(s);
  r.expanding = lambda_required_expanding(s);
  r.medial = medial_theta_required(s);
  r.preconditions_met = r.contracting <= lambda + sra_tolerance &&
                        r.expanding <= lambda + sra_tolerance && r.medial <= lambda + sra_tolerance;
  r.sra_holds = sra_check(s.as_space(), std::max(lambda, 0.0)).passed;
  return r;
}

} // namespace roughmetrics
