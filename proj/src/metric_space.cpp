#include "roughmetrics/metric_space.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "roughmetrics/error.hpp"

namespace roughmetrics {

const char* to_string(Norm n) { return n == Norm::taxicab ? "taxicab" : "euclidean"; }

Norm norm_from_string(const std::string& s) {
  if (s == "euclidean")
    return Norm::euclidean;
  if (s == "taxicab")
    return Norm::taxicab;
  throw DomainError("unknown norm '" + s + "'");
}

const char* to_string(ViolationKind k) {
  switch (k) {
  case ViolationKind::identity:
    return "identity";
  case ViolationKind::symmetry:
    return "symmetry";
  case ViolationKind::positivity:
    return "positivity";
  case ViolationKind::triangle:
    return "triangle";
  }
  return "?";
}

FiniteMetricSpace::FiniteMetricSpace(Eigen::MatrixXd distances, std::vector<std::string> labels,
                                     std::string name, SpaceSource source)
    : d_(std::move(distances)), labels_(std::move(labels)), name_(std::move(name)),
      source_(std::move(source)) {
  if (d_.rows() != d_.cols()) {
    std::ostringstream os;
    os << "distance matrix is " << d_.rows() << "x" << d_.cols() << ", expected square";
    throw StructuralError(os.str());
  }
  for (Index i = 0; i < d_.rows(); ++i)
    for (Index j = 0; j < d_.cols(); ++j) {
      const double v = d_(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream os;
        os << "entry (" << i << "," << j << ") = " << v << " is not a finite non-negative number";
        throw StructuralError(os.str());
      }
    }
  if (labels_.empty()) {
    labels_.reserve(static_cast<std::size_t>(d_.rows()));
    for (Index i = 0; i < d_.rows(); ++i)
      labels_.push_back(std::to_string(i));
  } else if (static_cast<Index>(labels_.size()) != d_.rows()) {
    throw StructuralError("label count does not match point count");
  }
}

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& coords, Norm norm) {
  const Index n = coords.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = norm_of(coords.row(i) - coords.row(j), norm);
  return d;
}

FiniteMetricSpace FiniteMetricSpace::from_coordinates(Eigen::MatrixXd coords, Norm norm,
                                                      std::vector<std::string> labels,
                                                      std::string name) {
  if (!coords.allFinite())
    throw StructuralError("coordinates contain a non-finite value");
  Eigen::MatrixXd d = pairwise_distances(coords, norm);
  return FiniteMetricSpace(std::move(d), std::move(labels), std::move(name),
                           CoordinateSource{std::move(coords), norm});
}

std::string FiniteMetricSpace::kind() const {
  struct Visitor {
    std::string operator()(const MatrixSource&) const { return "matrix"; }
    std::string operator()(const CoordinateSource& c) const { return to_string(c.norm); }
    std::string operator()(const SnowflakeSource&) const { return "snowflake"; }
    std::string operator()(const ConstructionSource&) const { return "construction"; }
  };
  return std::visit(Visitor{}, source_);
}

FiniteMetricSpace FiniteMetricSpace::subspace(std::span<const Index> indices) const {
  const Index m = static_cast<Index>(indices.size());
  Eigen::MatrixXd d(m, m);
  std::vector<std::string> labels;
  labels.reserve(indices.size());
  for (Index a = 0; a < m; ++a) {
    if (indices[a] < 0 || indices[a] >= size())
      throw DomainError("subspace index out of range");
    labels.push_back(labels_[static_cast<std::size_t>(indices[a])]);
    for (Index b = 0; b < m; ++b)
      d(a, b) = d_(indices[a], indices[b]);
  }
  return FiniteMetricSpace(std::move(d), std::move(labels), name_);
}

FiniteMetricSpace FiniteMetricSpace::renamed(std::string name) const {
  FiniteMetricSpace copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

ValidationReport validate(const Eigen::MatrixXd& d, double tol) {
  if (d.rows() != d.cols())
    throw StructuralError("distance matrix is not square");
  ValidationReport r;
  const Index n = d.rows();
  auto add = [&](ViolationKind k, Triple t, double res) {
    r.passed = false;
    r.violations.push_back({k, t, res});
  };
  for (Index i = 0; i < n; ++i) {
    if (d(i, i) != 0.0)
      add(ViolationKind::identity, {i, i, -1}, d(i, i));
    for (Index j = i + 1; j < n; ++j) {
      const double diff = std::abs(d(i, j) - d(j, i));
      if (diff > tol * std::max(d(i, j), d(j, i)))
        add(ViolationKind::symmetry, {i, j, -1}, diff);
      if (d(i, j) == 0.0 || d(j, i) == 0.0)
        add(ViolationKind::positivity, {i, j, -1}, 0.0);
    }
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        if (k == i || k == j)
          continue;
        const double res = d(i, j) - d(i, k) - d(k, j);
        if (res > tol * d(i, j))
          add(ViolationKind::triangle, {i, j, k}, res);
      }
  return r;
}

ValidationReport validate(const FiniteMetricSpace& space, double tol) {
  return validate(space.matrix(), tol);
}

void require_metric(const FiniteMetricSpace& space, double tol) {
  const ValidationReport r = validate(space, tol);
  if (r.passed)
    return;
  const Violation& v = r.violations.front();
  std::ostringstream os;
  os << to_string(v.kind) << " axiom fails at (" << v.where.i << "," << v.where.j;
  if (v.where.k >= 0)
    os << "," << v.where.k;
  os << "), residual " << v.residual;
  throw MetricViolation(os.str());
}

FiniteMetricSpace snowflake(const FiniteMetricSpace& space, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("snowflake exponent must lie in (0, 1]");
  std::shared_ptr<const FiniteMetricSpace> base;
  double total = alpha;
  if (const auto* s = std::get_if<SnowflakeSource>(&space.source())) {
    base = s->base;
    total *= s->alpha;
  } else {
    base = std::make_shared<const FiniteMetricSpace>(space);
  }
  const Eigen::MatrixXd d = base->matrix().array().pow(total).matrix();
  return FiniteMetricSpace(d, space.labels(), space.name(), SnowflakeSource{base, total});
}

LpReport max_lp_exponent(const FiniteMetricSpace& space) {
  LpReport r;
  r.exponent = std::numeric_limits<double>::infinity();
  const Index n = space.size();
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      for (Index c = b + 1; c < n; ++c) {
        const double p = triangle_lp_exponent(space(a, b), space(a, c), space(b, c));
        if (p < r.exponent) {
          r.exponent = p;
          r.argmin = {a, b, c};
        }
      }
  return r;
}

ComparisonAngles comparison_angles(const FiniteMetricSpace& space, Index i, Index j, Index k) {
  const Index n = space.size();
  if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n || i == j || j == k || i == k)
    throw DomainError("comparison angles need three distinct valid indices");
  // side opposite each vertex
  const std::array<double, 3> opp{space(j, k), space(i, k), space(i, j)};
  ComparisonAngles r;
  const double pi = std::numbers::pi;
  const auto longest = static_cast<std::size_t>(std::max_element(opp.begin(), opp.end()) - opp.begin());
  const double others = opp[(longest + 1) % 3] + opp[(longest + 2) % 3];
  if (opp[longest] >= others * (1.0 - 1e-12)) {
    r.degenerate = true;
    r.at = {0.0, 0.0, 0.0};
    r.at[longest] = pi;
    return r;
  }
  for (std::size_t v = 0; v < 3; ++v) {
    const double a = opp[(v + 1) % 3];
    const double b = opp[(v + 2) % 3];
    const double c = opp[v];
    const double cosv = std::clamp((a * a + b * b - c * c) / (2.0 * a * b), -1.0, 1.0);
    r.at[v] = std::acos(cosv);
  }
  return r;
}

std::vector<DoublingRow> doubling_probe(const FiniteMetricSpace& space,
                                        std::span<const double> radii) {
  if (radii.empty())
    throw DomainError("doubling probe needs at least one radius");
  std::vector<DoublingRow> rows;
  const Index n = space.size();
  for (double r : radii) {
    if (!(r > 0.0))
      throw DomainError("doubling probe radii must be positive");
    DoublingRow row{r, 0, -1};
    std::vector<Index> chosen;
    for (Index x = 0; x < n; ++x) {
      chosen.clear();
      for (Index y = 0; y < n; ++y) {
        if (space(x, y) > r)
          continue;
        bool separated = true;
        for (Index c : chosen)
          if (space(c, y) < r / 2) {
            separated = false;
            break;
          }
        if (separated)
          chosen.push_back(y);
      }
      if (static_cast<Index>(chosen.size()) > row.count) {
        row.count = static_cast<Index>(chosen.size());
        row.center = x;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

} // namespace roughmetrics
