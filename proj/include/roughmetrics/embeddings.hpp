#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "roughmetrics/constructions.hpp"
#include "roughmetrics/metric_space.hpp"

namespace roughmetrics {

/// Pairwise ratios |f(x) - f(y)| / d(x, y).
///
/// expansion is the largest ratio, contraction the inverse of the smallest.
/// lipschitz = max(expansion, contraction) is the constant of the map as
/// given; rescaled = sqrt(expansion * contraction) is the best constant
/// after a uniform rescaling.
struct Distortion {
  double expansion = 1.0;
  double contraction = 1.0;
  double lipschitz = 1.0;
  double rescaled = 1.0;
};

/// Throws DomainError when exactly one of d(x, y) and |f(x) - f(y)| vanishes.
Distortion distortion(const Eigen::MatrixXd& d, const Eigen::MatrixXd& coords, Norm norm);
Distortion distortion(const FiniteMetricSpace& space, const Eigen::MatrixXd& coords, Norm norm);

struct EmbeddingResult {
  Eigen::MatrixXd coords; // one point per row
  Norm norm = Norm::euclidean;
  Distortion distortion;
  bool exact = false; // every distance reproduced within 1e-9 (relative to the diameter)
};

struct SchoenbergOutcome {
  bool embeddable = false;
  double min_eigenvalue = 0.0; // of the Gram matrix, before clamping
  EmbeddingResult embedding;   // filled when embeddable
};

/// Isometric Euclidean embedding from the Gram matrix based at `base_index`.
/// Eigenvalues above -1e-9 * max(1, largest) are clamped to zero; anything
/// lower means the space does not embed. Dimension is the numerical rank.
SchoenbergOutcome schoenberg_embed(const FiniteMetricSpace& space, Index base_index = 0);

/// The l1 map of the metric tree on t into R^(M+1):
/// (x, 0) -> x e_0, the point at height y t_k over t_k -> t_k e_0 + y t_k e_r
/// with r = ((k - 1) mod M) + 1. Distortion is measured against the tree
/// distance. Throws DomainError naming k when t_(k+M) > t_k / 2.
EmbeddingResult tree_embed_F(std::span<const double> t, int M, std::span<const TreePoint> points);

struct SequenceConditions {
  bool cond3 = false;      // t_(k+m) <= (1 - delta) t_k on the prefix
  Index cond4_sup = 0;     // max_k sup{j >= 0 : t_(k+j) > t_k / 2}
  bool cond4_truncated = false; // some sup ran into the end of the prefix
};

SequenceConditions sequence_condition_check(std::span<const double> t, double delta, int m);

/// Countable ultrametric space with one limit point, truncated to finitely
/// many levels. Level k holds the points at distance 2 t_k from the limit;
/// clusters[k] is their distance matrix with the level representative first.
/// Points of different levels k < l are 2 t_k apart. The limit point itself
/// is not included.
struct OneLimitSpace {
  std::vector<double> t;                 // strictly decreasing
  std::vector<Eigen::MatrixXd> clusters; // one per level

  FiniteMetricSpace space() const;
  std::vector<Index> representatives() const; // index of each level's first point
};

struct OneLimitEmbedding {
  EmbeddingResult embedding;
  double lower_bound = 0.0; // 1/(4L)
  double upper_bound = 0.0; // L + 1/(4L)
  double cross_min = 0.0;   // ratios over pairs in different levels
  double cross_max = 0.0;
  double within_min = 0.0;  // ratios over pairs in the same level, 0 when none
  double within_max = 0.0;
  bool cross_within_bounds = false;
};

/// G(p) = F(p_k') (+) iota_k(p) / (8L), iota_k the Gram embedding of level k
/// translated so that p_k' sits at the origin. The image uses the Euclidean
/// norm; F must be L-bi-Lipschitz on the representatives in that norm.
/// F has one row per level. Throws DomainError when a level has more than J
/// points and PreconditionError when F is not L-bi-Lipschitz.
OneLimitEmbedding one_limit_embed_G(const OneLimitSpace& y, double L, const Eigen::MatrixXd& F, int J);

} // namespace roughmetrics
