#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "roughmetrics/constructions.hpp"
#include "roughmetrics/sra.hpp"

namespace roughmetrics {

struct SearchOptions {
  std::uint64_t node_budget = 100'000'000;
  int threads = 1; // > 1 splits the search over first elements
  double tol = sra_tolerance;
};

struct SearchResult {
  Index cardinality = 0;
  std::vector<Index> subset; // ascending; lexicographically least optimum
  std::uint64_t nodes_explored = 0;
  bool proved_optimal = true;
};

/// Largest subset satisfying SRA(alpha), by branch and bound.
SearchResult max_sra_subset(const FiniteMetricSpace& space, double alpha,
                            const SearchOptions& options = {});

struct GrowthRow {
  int size = 0;
  SearchResult result;
};

struct GrowthProfile {
  std::vector<GrowthRow> rows;
  bool monotone = true; // cardinalities nondecreasing in size
};

GrowthProfile sra_growth_profile(const std::function<FiniteMetricSpace(int)>& family, double alpha,
                                 std::span<const int> sizes, const SearchOptions& options = {});

/// Profile over a named family, substituting each size for params[size_key].
GrowthProfile sra_growth_profile(const ConstructionSpec& spec, const std::string& size_key,
                                 double alpha, std::span<const int> sizes,
                                 const SearchOptions& options = {});

/// Whether the alpha-snowflake of `space` satisfies SRA(2^alpha - 1).
bool snowflake_embeddability_cardinality_check(const FiniteMetricSpace& space, double alpha);

} // namespace roughmetrics
