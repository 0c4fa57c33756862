#include "roughmetrics/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "roughmetrics/error.hpp"

namespace roughmetrics {

namespace {

constexpr double exact_tol = 1e-9;
constexpr double psd_tol = 1e-9;

bool reproduces(const Eigen::MatrixXd& d, const Eigen::MatrixXd& coords, Norm norm) {
  const Index n = d.rows();
  const double scale = std::max(1.0, d.maxCoeff());
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(norm_of(coords.row(i) - coords.row(j), norm) - d(i, j)) > exact_tol * scale)
        return false;
  return true;
}

EmbeddingResult make_result(const Eigen::MatrixXd& d, Eigen::MatrixXd coords, Norm norm) {
  EmbeddingResult r;
  r.distortion = distortion(d, coords, norm);
  r.exact = reproduces(d, coords, norm);
  r.coords = std::move(coords);
  r.norm = norm;
  return r;
}

} // namespace

Distortion distortion(const Eigen::MatrixXd& d, const Eigen::MatrixXd& coords, Norm norm) {
  if (coords.rows() != d.rows())
    throw StructuralError("coordinate rows do not match the number of points");
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < d.rows(); ++i)
    for (Index j = i + 1; j < d.rows(); ++j) {
      const double img = norm_of(coords.row(i) - coords.row(j), norm);
      if ((d(i, j) == 0.0) != (img == 0.0))
        throw DomainError("points " + std::to_string(i) + " and " + std::to_string(j) +
                          ": one of the distance and its image is zero");
      if (d(i, j) == 0.0)
        continue;
      const double ratio = img / d(i, j);
      hi = std::max(hi, ratio);
      lo = std::min(lo, ratio);
    }
  Distortion out;
  if (hi == 0.0)
    return out;
  out.expansion = hi;
  out.contraction = 1.0 / lo;
  out.lipschitz = std::max(out.expansion, out.contraction);
  out.rescaled = std::sqrt(out.expansion * out.contraction);
  return out;
}

Distortion distortion(const FiniteMetricSpace& space, const Eigen::MatrixXd& coords, Norm norm) {
  return distortion(space.matrix(), coords, norm);
}

SchoenbergOutcome schoenberg_embed(const FiniteMetricSpace& space, Index base_index) {
  const Index n = space.size();
  if (n == 0)
    throw DomainError("cannot embed an empty space");
  if (base_index < 0 || base_index >= n)
    throw DomainError("base index out of range");
  const Eigen::MatrixXd& d = space.matrix();
  const Eigen::MatrixXd sq = d.cwiseProduct(d);
  Eigen::MatrixXd gram(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      gram(i, j) = 0.5 * (sq(base_index, i) + sq(base_index, j) - sq(i, j));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success)
    throw Error("eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues(); // ascending
  SchoenbergOutcome out;
  out.min_eigenvalue = ev(0);
  const double cutoff = psd_tol * std::max(1.0, ev(n - 1));
  if (ev(0) < -cutoff)
    return out;

  std::vector<Index> keep;
  for (Index c = n - 1; c >= 0; --c)
    if (ev(c) > cutoff)
      keep.push_back(c);
  Eigen::MatrixXd coords(n, static_cast<Index>(keep.size()));
  for (Index a = 0; a < static_cast<Index>(keep.size()); ++a) {
    Eigen::VectorXd v = es.eigenvectors().col(keep[static_cast<std::size_t>(a)]);
    Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    if (v(at) < 0.0)
      v = -v;
    coords.col(a) = v * std::sqrt(ev(keep[static_cast<std::size_t>(a)]));
  }
  coords.row(base_index).setZero();
  out.embeddable = true;
  out.embedding = make_result(d, std::move(coords), Norm::euclidean);
  return out;
}

EmbeddingResult tree_embed_F(std::span<const double> t, int M, std::span<const TreePoint> points) {
  if (M < 1)
    throw DomainError("M must be at least 1");
  for (std::size_t k = 0; k + static_cast<std::size_t>(M) < t.size(); ++k)
    if (t[k + static_cast<std::size_t>(M)] > 0.5 * t[k])
      throw DomainError("t_(k+M) > t_k / 2 at k = " + std::to_string(k + 1));
  const Index n = static_cast<Index>(points.size());
  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(n, M + 1);
  Eigen::MatrixXd d(n, n);
  for (Index i = 0; i < n; ++i) {
    const TreePoint& p = points[static_cast<std::size_t>(i)];
    if (p.segment < 0 || p.segment > static_cast<int>(t.size()))
      throw DomainError("tree segment out of range");
    if (p.segment == 0) {
      coords(i, 0) = p.param;
    } else {
      const double tk = t[static_cast<std::size_t>(p.segment - 1)];
      coords(i, 0) = tk;
      coords(i, (p.segment - 1) % M + 1) = p.param * tk;
    }
    for (Index j = 0; j < n; ++j)
      d(i, j) = tree_distance(t, p, points[static_cast<std::size_t>(j)]);
  }
  return make_result(d, std::move(coords), Norm::taxicab);
}

SequenceConditions sequence_condition_check(std::span<const double> t, double delta, int m) {
  if (!(delta > 0.0 && delta < 1.0))
    throw DomainError("delta must lie in (0, 1)");
  if (m < 1)
    throw DomainError("m must be at least 1");
  SequenceConditions out;
  out.cond3 = true;
  const std::size_t len = t.size();
  for (std::size_t k = 0; k + static_cast<std::size_t>(m) < len; ++k)
    if (t[k + static_cast<std::size_t>(m)] > (1.0 - delta) * t[k] * (1.0 + 1e-12))
      out.cond3 = false;
  for (std::size_t k = 0; k < len; ++k) {
    std::size_t j = 0;
    while (k + j + 1 < len && t[k + j + 1] > 0.5 * t[k])
      ++j;
    if (k + j + 1 == len && j > 0)
      out.cond4_truncated = true;
    out.cond4_sup = std::max(out.cond4_sup, static_cast<Index>(j));
  }
  return out;
}

FiniteMetricSpace OneLimitSpace::space() const {
  if (t.size() != clusters.size())
    throw StructuralError("one cluster per level is required");
  std::vector<Index> start = representatives();
  Index n = 0;
  for (const auto& c : clusters)
    n += c.rows();
  Eigen::MatrixXd d(n, n);
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Eigen::MatrixXd& c = clusters[k];
    if (c.rows() < 1 || c.rows() != c.cols())
      throw StructuralError("cluster " + std::to_string(k + 1) + " must be a non-empty square matrix");
    for (Index a = 0; a < c.rows(); ++a)
      labels.push_back("L" + std::to_string(k + 1) + "." + std::to_string(a));
    for (std::size_t l = 0; l < t.size(); ++l) {
      const double cross = 2.0 * std::max(t[k], t[l]);
      d.block(start[k], start[l], c.rows(), clusters[l].rows()).setConstant(cross);
    }
    d.block(start[k], start[k], c.rows(), c.rows()) = c;
  }
  return FiniteMetricSpace(std::move(d), std::move(labels), "one_limit");
}

std::vector<Index> OneLimitSpace::representatives() const {
  std::vector<Index> out;
  Index at = 0;
  for (const auto& c : clusters) {
    out.push_back(at);
    at += c.rows();
  }
  return out;
}

OneLimitEmbedding one_limit_embed_G(const OneLimitSpace& y, double L, const Eigen::MatrixXd& F, int J) {
  if (!(L >= 1.0))
    throw DomainError("L must be at least 1");
  if (J < 1)
    throw DomainError("J must be at least 1");
  const std::size_t levels = y.t.size();
  if (static_cast<std::size_t>(F.rows()) != levels)
    throw StructuralError("F needs one row per level");
  for (std::size_t k = 0; k < levels; ++k)
    if (y.clusters[k].rows() > J)
      throw DomainError("level " + std::to_string(k + 1) + " has " +
                        std::to_string(y.clusters[k].rows()) + " points, more than J = " +
                        std::to_string(J));

  const FiniteMetricSpace space = y.space();
  const std::vector<Index> reps = y.representatives();
  const Distortion fd = distortion(space.subspace(reps), F, Norm::euclidean);
  if (fd.expansion > L * (1.0 + 1e-9) || fd.contraction > L * (1.0 + 1e-9))
    throw PreconditionError("F is not L-bi-Lipschitz on the level representatives (constant " +
                            std::to_string(fd.lipschitz) + ")");

  const Index fdim = F.cols();
  const Index n = space.size();
  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(n, fdim + J - 1);
  std::vector<std::size_t> level_of(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < levels; ++k) {
    const Eigen::MatrixXd& c = y.clusters[k];
    const SchoenbergOutcome iota = schoenberg_embed(FiniteMetricSpace(c), 0);
    if (!iota.embeddable)
      throw PreconditionError("level " + std::to_string(k + 1) + " is not Euclidean-embeddable");
    const Eigen::MatrixXd& w = iota.embedding.coords;
    for (Index a = 0; a < c.rows(); ++a) {
      const Index row = reps[k] + a;
      level_of[static_cast<std::size_t>(row)] = k;
      coords.row(row).head(fdim) = F.row(static_cast<Index>(k));
      coords.row(row).segment(fdim, w.cols()) = w.row(a) / (8.0 * L);
    }
  }

  OneLimitEmbedding out;
  out.lower_bound = 1.0 / (4.0 * L);
  out.upper_bound = L + 1.0 / (4.0 * L);
  out.cross_min = std::numeric_limits<double>::infinity();
  double within_min = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double ratio = (coords.row(i) - coords.row(j)).norm() / space(i, j);
      if (level_of[static_cast<std::size_t>(i)] == level_of[static_cast<std::size_t>(j)]) {
        within_min = std::min(within_min, ratio);
        out.within_max = std::max(out.within_max, ratio);
      } else {
        out.cross_min = std::min(out.cross_min, ratio);
        out.cross_max = std::max(out.cross_max, ratio);
      }
    }
  if (std::isfinite(within_min))
    out.within_min = within_min;
  if (!std::isfinite(out.cross_min))
    out.cross_min = 0.0;
  const double slack = 1e-9;
  out.cross_within_bounds = levels < 2 || (out.cross_min >= out.lower_bound - slack &&
                                           out.cross_max <= out.upper_bound + slack);
  out.embedding = make_result(space.matrix(), std::move(coords), Norm::euclidean);
  return out;
}

} // namespace roughmetrics
