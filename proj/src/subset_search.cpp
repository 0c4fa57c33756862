#include "roughmetrics/subset_search.hpp"

#include <atomic>
#include <bit>
#include <thread>

#include "roughmetrics/error.hpp"

namespace roughmetrics {

namespace {

using Word = std::uint64_t;

/// compat(a, b) is the set of c > b such that {a, b, c} is feasible.
class Compatibility {
public:
  Compatibility(const Eigen::MatrixXd& d, double limit)
      : n_(d.rows()), words_((n_ + 63) / 64),
        bits_(static_cast<std::size_t>(n_ * n_ * words_), Word{0}) {
    for (Index a = 0; a < n_; ++a)
      for (Index b = a + 1; b < n_; ++b) {
        Word* row = mutable_row(a, b);
        for (Index c = b + 1; c < n_; ++c)
          if (triple_required_alpha(d, a, b, c) <= limit)
            row[c / 64] |= Word{1} << (c % 64);
      }
  }

  Index words() const { return words_; }
  const Word* row(Index a, Index b) const { return bits_.data() + (a * n_ + b) * words_; }

private:
  Word* mutable_row(Index a, Index b) { return bits_.data() + (a * n_ + b) * words_; }

  Index n_;
  Index words_;
  std::vector<Word> bits_;
};

Index count_from(const std::vector<Word>& set, Index from) {
  Index total = 0;
  const Index w0 = from / 64;
  for (Index w = w0; w < static_cast<Index>(set.size()); ++w) {
    Word x = set[static_cast<std::size_t>(w)];
    if (w == w0)
      x &= ~Word{0} << (from % 64);
    total += std::popcount(x);
  }
  return total;
}

struct Shared {
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> exhausted{false};
  std::atomic<Index> global_best{0};
  std::uint64_t budget = 0;
};

class Branch {
public:
  Branch(const Compatibility& compat, Index n, Shared& shared, bool strict_global)
      : compat_(compat), n_(n), shared_(shared), strict_global_(strict_global) {}

  void run(std::vector<Index> start, std::vector<Word> cands) {
    cur_ = std::move(start);
    visit(cands);
  }

  Index best_size() const { return static_cast<Index>(best_.size()); }
  const std::vector<Index>& best() const { return best_; }

private:
  bool pruned(Index bound) const {
    if (bound <= best_size())
      return true;
    const Index g = shared_.global_best.load(std::memory_order_relaxed);
    return strict_global_ ? bound < g : bound <= g;
  }

  void visit(const std::vector<Word>& cands) {
    if (shared_.nodes.fetch_add(1, std::memory_order_relaxed) >= shared_.budget) {
      shared_.exhausted = true;
      return;
    }
    if (static_cast<Index>(cur_.size()) > best_size()) {
      best_ = cur_;
      Index g = shared_.global_best.load();
      while (best_size() > g && !shared_.global_best.compare_exchange_weak(g, best_size())) {
      }
    }
    const Index words = compat_.words();
    std::vector<Word> next(static_cast<std::size_t>(words));
    for (Index c = 0; c < n_; ++c) {
      if (!(cands[static_cast<std::size_t>(c / 64)] >> (c % 64) & 1U))
        continue;
      if (shared_.exhausted || pruned(static_cast<Index>(cur_.size()) + count_from(cands, c)))
        return;
      // later candidates that stay feasible with every pair (a, c)
      for (Index w = 0; w < words; ++w)
        next[static_cast<std::size_t>(w)] = w < c / 64 ? 0 : cands[static_cast<std::size_t>(w)];
      next[static_cast<std::size_t>(c / 64)] &= c % 64 == 63 ? 0 : ~Word{0} << (c % 64 + 1);
      for (Index a : cur_) {
        const Word* row = compat_.row(a, c);
        for (Index w = c / 64; w < words; ++w)
          next[static_cast<std::size_t>(w)] &= row[w];
      }
      cur_.push_back(c);
      visit(next);
      cur_.pop_back();
    }
  }

  const Compatibility& compat_;
  Index n_;
  Shared& shared_;
  bool strict_global_;
  std::vector<Index> cur_;
  std::vector<Index> best_;
};

std::vector<Word> full_set(Index n, Index from) {
  std::vector<Word> s(static_cast<std::size_t>((n + 63) / 64), 0);
  for (Index c = from; c < n; ++c)
    s[static_cast<std::size_t>(c / 64)] |= Word{1} << (c % 64);
  return s;
}

} // namespace

SearchResult max_sra_subset(const FiniteMetricSpace& space, double alpha,
                            const SearchOptions& options) {
  if (!(alpha >= 0.0))
    throw DomainError("SRA parameter must be non-negative");
  const Index n = space.size();
  SearchResult r;
  if (n <= 2) {
    for (Index i = 0; i < n; ++i)
      r.subset.push_back(i);
    r.cardinality = n;
    r.nodes_explored = 1;
    return r;
  }
  const Compatibility compat(space.matrix(), alpha + options.tol);
  Shared shared;
  shared.budget = options.node_budget;

  if (options.threads <= 1) {
    Branch b(compat, n, shared, false);
    b.run({}, full_set(n, 0));
    r.subset = b.best();
  } else {
    // one task per first element; each keeps its own lexicographically
    // first optimum and only prunes strictly against the global best
    std::vector<std::vector<Index>> found(static_cast<std::size_t>(n));
    std::atomic<Index> next_root{0};
    auto worker = [&] {
      for (Index root = next_root++; root < n; root = next_root++) {
        Branch b(compat, n, shared, true);
        b.run({root}, full_set(n, root + 1));
        found[static_cast<std::size_t>(root)] = b.best();
      }
    };
    std::vector<std::thread> pool;
    const int t = std::min<int>(options.threads, static_cast<int>(n));
    for (int i = 0; i < t; ++i)
      pool.emplace_back(worker);
    for (auto& th : pool)
      th.join();
    for (const auto& f : found)
      if (f.size() > r.subset.size())
        r.subset = f;
  }
  r.cardinality = static_cast<Index>(r.subset.size());
  r.nodes_explored = std::min(shared.nodes.load(), shared.budget);
  r.proved_optimal = !shared.exhausted;
  return r;
}

GrowthProfile sra_growth_profile(const std::function<FiniteMetricSpace(int)>& family, double alpha,
                                 std::span<const int> sizes, const SearchOptions& options) {
  GrowthProfile p;
  for (int size : sizes) {
    p.rows.push_back({size, max_sra_subset(family(size), alpha, options)});
    const auto& rows = p.rows;
    if (rows.size() > 1 && rows.back().result.cardinality < rows[rows.size() - 2].result.cardinality)
      p.monotone = false;
  }
  return p;
}

GrowthProfile sra_growth_profile(const ConstructionSpec& spec, const std::string& size_key,
                                 double alpha, std::span<const int> sizes,
                                 const SearchOptions& options) {
  return sra_growth_profile(
      [&](int size) {
        ConstructionSpec s = spec;
        s.params[size_key] = size;
        return build(s);
      },
      alpha, sizes, options);
}

bool snowflake_embeddability_cardinality_check(const FiniteMetricSpace& space, double alpha) {
  return sra_check(snowflake(space, alpha), snowflake_sra_parameter(alpha)).passed;
}

} // namespace roughmetrics
