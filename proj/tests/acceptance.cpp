// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "roughmetrics/constructions.hpp"
#include "roughmetrics/embeddings.hpp"
#include "roughmetrics/sra.hpp"
#include "roughmetrics/subset_search.hpp"
#include "roughmetrics/witness.hpp"
#include "support/oracles.hpp"

using namespace roughmetrics;

namespace {

struct Criterion {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void report(int id, const std::string& name, const std::function<void(Criterion&)>& body) {
  Criterion c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  if (!c.ok)
    ++failures;
  std::printf("%s %2d %s%s%s\n", c.ok ? "PASS" : "FAIL", id, name.c_str(), c.detail.empty() ? "" : ": ",
              c.detail.c_str());
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<double> dyadic(int count) {
  std::vector<double> v;
  for (int m = 1; m <= count; ++m)
    v.push_back(std::ldexp(1.0, -m));
  return v;
}

// smallest R >= 2 with lhs(R) >= rhs(R), lhs increasing faster; bisection on [2, 1e4]
double smallest_r(const std::function<double(double)>& gap) {
  double lo = 2.0, hi = 1e4;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) >= 0.0 ? hi : lo) = mid;
  }
  return hi;
}

// Laakso distance from the common prefix: c(0) = 2, c(k) = 4/3 (4^k - 1), over 4^m.
// Exact as (3 c(k), 3 * 4^m).
bool laakso_exact(int m) {
  const FiniteMetricSpace f = laakso_level(m);
  const long long den = 3LL << (2 * m);
  for (std::uint64_t v = 0; v < (1u << m); ++v)
    for (std::uint64_t w = 0; w < (1u << m); ++w) {
      if (v == w)
        continue;
      int prefix = 0;
      while (prefix < m && ((v >> (m - 1 - prefix)) & 1) == ((w >> (m - 1 - prefix)) & 1))
        ++prefix;
      const int k = m - 1 - prefix;
      const long long num3 = k == 0 ? 6 : 4 * ((1LL << (2 * k)) - 1);
      const Rational r = laakso_distance(m, v, w);
      if (r.num * den != num3 * r.den)
        return false;
      if (f(static_cast<Index>(v), static_cast<Index>(w)) != static_cast<double>(num3) / static_cast<double>(den))
        return false;
    }
  return true;
}

} // namespace

int main() {
  report(1, "snowflake sharpness", [](Criterion& c) {
    oracle::Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      const FiniteMetricSpace s = oracle::random_space(rng, 8);
      c.require(validate(s).passed, "random space is not a metric");
      for (double a : {0.3, 0.5, 0.8}) {
        const double req = sra_required_alpha(snowflake(s, a)).required_alpha;
        c.require(req <= std::exp2(a) - 1.0 + 1e-12, "required alpha " + num(req) + " above 2^a-1 at a=" + num(a));
      }
    }
    const FiniteMetricSpace line(oracle::to_eigen(oracle::line({0, 1, 2})));
    for (double a : {0.3, 0.5, 0.8}) {
      const double req = sra_required_alpha(snowflake(line, a)).required_alpha;
      c.require(std::abs(req - (std::exp2(a) - 1.0)) <= 1e-12, "arithmetic triple gives " + num(req));
    }
  });

  report(2, "Laakso golden table", [](Criterion& c) {
    c.require(laakso_level(1)(0, 1) == 0.5, "F_1");
    const auto f2 = laakso_level(2);
    c.require(f2(0, 1) == 1.0 / 8 && f2(0, 2) == 1.0 / 4, "F_2");
    const auto f3 = laakso_level(3);
    c.require(f3(0, 1) == 1.0 / 32 && f3(0, 2) == 1.0 / 16 && f3(0, 4) == 5.0 / 16, "F_3");
    c.require(laakso_distance(3, 0, 4) == Rational{5, 16}, "rational F_3 entry");
    for (int m = 1; m <= 6; ++m)
      c.require(laakso_exact(m), "prefix formula mismatch at m=" + std::to_string(m));
    for (int m = 1; m <= 8; ++m)
      c.require(is_ultrametric(laakso_level(m)), "F_" + std::to_string(m) + " not ultrametric");
  });

  report(3, "geometric SRA sequence", [](Criterion& c) {
    const double eps = 0.3, alpha = 0.6;
    const double a = solve_root_a(eps, alpha);
    c.require(std::abs(a - 0.1621) <= 1e-3, "root " + num(a));
    const double rel = (1.0 - std::pow(1.0 - a, alpha)) / std::pow(a, alpha);
    c.require(std::abs(rel - eps) <= 1e-10, "eps-a relation off by " + num(rel - eps));
    const FiniteMetricSpace s = geometric_sra_sequence(eps, alpha, 25);
    c.require(sra_check(s, eps).passed, "25-term prefix fails sra_check(0.3)");
    const double brute = oracle::required_alpha(oracle::to_mat(s.matrix()));
    c.require(brute <= eps + 1e-10, "brute force gives " + num(brute));
  });

  report(4, "Cantor proposition", [](Criterion& c) {
    const double alpha = 0.6, eps = 0.3;
    const double a = solve_root_a(eps, alpha);
    const double ep = (std::pow(1 - a, alpha) - std::pow(1 - 2 * a, alpha)) / std::pow(a, alpha);
    c.require(std::abs(ep - 0.3243) <= 1e-3, "eps' " + num(ep));
    c.require(std::abs(eps_prime(alpha, a) - ep) <= 1e-14, "library eps' differs");
    const FiniteMetricSpace s = cantor_approx(alpha, eps, 5);
    const double req = sra_required_alpha(s).required_alpha;
    c.require(std::abs(req - ep) <= 1e-9, "level-5 required alpha " + num(req));
    const auto pts = cantor_endpoints(a, 5);
    auto at = [&](double x) {
      Index best = 0;
      for (Index i = 0; i < static_cast<Index>(pts.size()); ++i)
        if (std::abs(pts[i] - x) < std::abs(pts[best] - x))
          best = i;
      return best;
    };
    const Index i0 = at(0.0), ia = at(a), i1 = at(1.0 - a);
    const double triple = oracle::needed_alpha(s(i0, i1), s(i0, ia), s(ia, i1));
    c.require(std::abs(triple - req) <= 1e-9, "(0, a, 1-a) gives " + num(triple));
    c.require(eps < ep && ep < alpha, "ordering eps < eps' < alpha");
  });

  report(5, "Hilbert and Heisenberg examples", [](Criterion& c) {
    std::vector<double> coeff;
    for (int k = 1; k <= 20; ++k)
      coeff.push_back(1.0 / k);
    c.require(sra_check(hilbert_sequence(coeff), std::sqrt(2.0) - 1.0).passed, "Hilbert sequence");
    std::vector<double> ts;
    for (int k = 0; k < 12; ++k)
      ts.push_back(k);
    const double p = max_lp_exponent(heisenberg_axis(ts)).exponent;
    c.require(std::abs(p - 2.0) <= 1e-9, "Heisenberg L^p exponent " + num(p));
  });

  report(6, "simplex with center", [](Criterion& c) {
    for (int n : {2, 3}) {
      const double want = std::sqrt(2.0 * (n + 1) / n) - 1.0;
      const double got = oracle::required_alpha(oracle::to_mat(simplex_with_center(n).matrix()));
      c.require(std::abs(got - want) <= 1e-9, "n=" + std::to_string(n) + " gives " + num(got));
      c.require(std::abs(sra_required_alpha(simplex_with_center(n)).required_alpha - want) <= 1e-9,
                "library value at n=" + std::to_string(n));
    }
  });

  report(7, "q identity and UNC of snowflakes", [](Criterion& c) {
    for (int i = 1; i <= 99; ++i) {
      const double a = i / 100.0;
      const double lhs = snowflake_exponent_q(a).value;
      const double rhs = tw_exponent_q(unc_delta_from_sra(a).value).value;
      c.require(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, lhs), "identity off at alpha=" + num(a));
    }
    oracle::Rng rng(7);
    std::uniform_real_distribution<double> expo(0.1, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
      const double e = expo(rng);
      const FiniteMetricSpace s = snowflake(oracle::random_space(rng, 8), e);
      const double alpha = std::exp2(e) - 1.0;
      c.require(sra_check(s, alpha).passed, "snowflake is not SRA(2^e-1)");
      c.require(unc_check(s, unc_delta_from_sra(alpha).value).passed, "UNC fails at exponent " + num(e));
    }
  });

  report(8, "Hilbert-space triangle construction", [](Criterion& c) {
    const double a = 0.8;
    const double r1 = 1.0 + 2.0 / a;
    const double r2 = 1.0 + 1.0 / std::sqrt(2.0);
    auto root = [&](double R) { return 2.0 * a * std::sqrt(2.0 * R * R - 4.0 * R); };
    const double r3 = smallest_r([&](double R) { return root(R) - 1.0; });
    const double r4 = smallest_r([&](double R) { return root(R) - (2.0 * R + 1.0); });
    const double r5 = smallest_r([&](double R) { return root(R) - (2.0 + 2.0 * R); });
    const double rmin = std::max({r1, r2, r3, r4, r5});
    c.require(std::abs(rmin - 16.5021) <= 1e-3, "recomputed r_min " + num(rmin));
    c.require(std::abs(r_min(a) - rmin) <= 1e-9, "library r_min " + num(r_min(a)));
    const FiniteMetricSpace s = hilbert_triangles(a, 17.0, 5, dyadic(5));
    c.require(oracle::required_alpha(oracle::to_mat(s.matrix())) <= a + 1e-12, "brute force above 0.8");
    c.require(sra_check(s, a).passed, "sra_check(0.8) fails");
    const double d1 = 0.5;
    c.require(std::pow(1.0 + a * d1, 1.5) > 1.0 + std::pow(d1, 1.5), "no violation at m=1");
    const auto first = no_converse_first_violation(a, dyadic(5), 1.5);
    c.require(first && *first == 1, "library first violation is not m=1");
  });

  report(9, "witness constants", [](Criterion& c) {
    // theta = 0.8 violates the alpha premise of the full bundle, so the
    // (theta, m)-only constants are checked
    const IterationConstants k = iteration_constants(0.8, 3);
    c.require(k.rho == 45.0, "rho " + num(k.rho));
    c.require(k.c1 == 46.0, "C1 " + num(k.c1));
    c.require(k.lambda1 == 1.0 / 276.0, "lambda1 " + num(k.lambda1));
    c.require(k.big_c == 1656.0, "C " + num(k.big_c));
    c.require(index_bound_p(0.1, 3.0, 0.9) == 5, "p = " + std::to_string(index_bound_p(0.1, 3.0, 0.9)));
  });

  report(10, "index property on sampled sets", [](Criterion& c) {
    const double theta = 0.1, M = 3.0, alpha = 0.9;
    const int p = index_bound_p(theta, M, alpha);
    oracle::Rng rng(10);
    int accepted = 0, bad = 0;
    for (long trial = 0; trial < 2'000'000 && accepted < 200; ++trial) {
      const oracle::Mat d = oracle::euclidean(oracle::shrinking_walk(rng, p));
      if (oracle::medial_theta(d) > theta || oracle::bounded_turning(d) > M)
        continue;
      ++accepted;
      const Prop2Result r = prop2_check(oracle::ordered(d), theta, M, alpha);
      if (!r.premises_met || !r.index) {
        ++bad;
        continue;
      }
      const Index i = *r.index, last = p - 1;
      if (!(i + 2 <= last && d[i + 1][last] < d[i][last] + alpha * d[i][i + 1]))
        ++bad;
    }
    c.require(accepted == 200, "only " + std::to_string(accepted) + " premise-satisfying samples");
    c.require(bad == 0, std::to_string(bad) + " samples without a witnessing index");
  });

  report(11, "P^t engine and extraction", [](Criterion& c) {
    const double theta = 0.5;
    const int m = 3;
    const IterationConstants k = iteration_constants(theta, m);
    oracle::Rng rng(11);
    std::uniform_int_distribution<int> size(8, 20);
    int runs = 0, steps = 0, terminations = 0;
    for (int trial = 0; trial < 200000 && runs < 200; ++trial) {
      const OrderedSet s = oracle::ordered(oracle::euclidean(oracle::cone_walk(rng, size(rng), 0.6)));
      const double lam = lambda_required_expanding(s);
      if (lam > k.lambda1)
        continue;
      ++runs;
      const WitnessTrace tr = pt_iteration(s, theta, m);
      for (const StepCheck& sc : lemma_step_check(tr, s, lam)) {
        ++steps;
        c.require(sc.holds, "step inequality fails at t=" + std::to_string(sc.t));
      }
      if (tr.outcome == TraceOutcome::terminated) {
        ++terminations;
        c.require(discrete_length(s) <= k.big_c * discrete_diameter(s), "L > C D at termination");
      }
    }
    c.require(runs == 200, "only " + std::to_string(runs) + " sets with lambda <= lambda1");
    c.require(steps > 0, "no steps executed");
    const oracle::Mat d = oracle::euclidean(oracle::spiral(128, 0.3, 3.0));
    const ExtractionResult r = extract_sra_subset(oracle::ordered(d), 0.8, 4);
    c.require(r.status == ExtractionStatus::certified, std::string("extraction ") + to_string(r.status));
    if (r.subset.size() == 4) {
      const FiniteMetricSpace sub = FiniteMetricSpace(oracle::to_eigen(d)).subspace(r.subset);
      c.require(sra_check(sub, 0.8, 0.0).passed, "subset fails exact sra_check");
    } else {
      c.require(false, "subset size " + std::to_string(r.subset.size()));
    }
    if (c.ok)
      c.detail = std::to_string(runs) + " sets, " + std::to_string(steps) + " steps, " +
                 std::to_string(terminations) + " terminations";
  });

  report(12, "embeddings", [](Criterion& c) {
    oracle::Rng rng(12);
    std::uniform_int_distribution<int> size(2, 16);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::MatrixXd d = oracle::to_eigen(oracle::random_ultrametric(rng, size(rng)));
      const SchoenbergOutcome s = schoenberg_embed(FiniteMetricSpace(d));
      c.require(s.embeddable, "ultrametric not embeddable");
      if (!s.embeddable)
        continue;
      c.require(s.embedding.coords.cols() <= d.rows() - 1, "dimension above n-1");
      double err = 0.0;
      for (Index i = 0; i < d.rows(); ++i)
        for (Index j = i + 1; j < d.rows(); ++j)
          err = std::max(err, std::abs((s.embedding.coords.row(i) - s.embedding.coords.row(j)).norm() - d(i, j)));
      c.require(err <= 1e-9 * std::max(1.0, d.maxCoeff()), "reconstruction error " + num(err));
    }

    std::vector<double> t;
    for (int k = 1; k <= 10; ++k)
      t.push_back(std::exp2(1 - k));
    const MetricTreeSample tree = metric_tree(t, 4);
    const EmbeddingResult f = tree_embed_F(t, 1, tree.points);
    c.require(f.distortion.lipschitz <= 4.0 + 1e-12, "tree distortion " + num(f.distortion.lipschitz));

    // J = 2: a pair at distance t_k in each of 4 levels, F(rep_k) = 2 t_k on the line
    OneLimitSpace y;
    Eigen::MatrixXd F(4, 1);
    for (int k = 1; k <= 4; ++k) {
      const double tk = std::exp2(1 - k);
      y.t.push_back(tk);
      Eigen::MatrixXd pair(2, 2);
      pair << 0, tk, tk, 0;
      y.clusters.push_back(pair);
      F(k - 1, 0) = 2.0 * tk;
    }
    const double L = 2.0;
    const OneLimitEmbedding g = one_limit_embed_G(y, L, F, 2);
    c.require(g.cross_min >= 1.0 / (4.0 * L) - 1e-9 && g.cross_max <= L + 1.0 / (4.0 * L) + 1e-9,
              "cross-level ratios [" + num(g.cross_min) + ", " + num(g.cross_max) + "]");
    if (c.ok)
      c.detail = "tree " + num(f.distortion.lipschitz) + ", G cross-level [" + num(g.cross_min) + ", " +
                 num(g.cross_max) + "] within [" + num(g.lower_bound) + ", " + num(g.upper_bound) +
                 "], same-level ratio " + num(g.within_min);
  });

  report(13, "branch and bound matches enumeration", [](Criterion& c) {
    oracle::Rng rng(13);
    int compared = 0;
    for (int n = 4; n <= 12; ++n)
      for (int trial = 0; trial < 3; ++trial) {
        const oracle::Mat d = oracle::euclidean(oracle::random_points(rng, n, 2));
        for (double a : {0.0, 0.3, 0.7}) {
          const SearchResult r = max_sra_subset(FiniteMetricSpace(oracle::to_eigen(d)), a);
          c.require(r.proved_optimal && r.cardinality == oracle::max_subset(d, a),
                    "n=" + std::to_string(n) + " alpha=" + num(a));
          ++compared;
        }
      }
    for (int m = 1; m <= 3; ++m)
      for (double a : {0.0, 0.5}) {
        const FiniteMetricSpace f = laakso_level(m);
        c.require(max_sra_subset(f, a).cardinality == oracle::max_subset(oracle::to_mat(f.matrix()), a), "Laakso");
        ++compared;
      }
    std::vector<double> grid;
    for (int k = 0; k < 10; ++k)
      grid.push_back(k);
    const oracle::Mat g = oracle::line(grid);
    const Index card = max_sra_subset(FiniteMetricSpace(oracle::to_eigen(g)), 0.0).cardinality;
    c.require(card == 2 && oracle::max_subset(g, 0.0) == 2, "grid cardinality " + std::to_string(card));
    if (c.ok)
      c.detail = std::to_string(compared + 1) + " spaces compared";
  });

  return failures == 0 ? 0 : 1;
}
