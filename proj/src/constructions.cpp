#include "roughmetrics/constructions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "roughmetrics/error.hpp"

namespace roughmetrics {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok)
    throw DomainError(what);
}

void require_decreasing(std::span<const double> v, bool strict, const std::string& what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(v[i] > 0.0 && std::isfinite(v[i]), what + " must be positive");
    if (i > 0)
      require(strict ? v[i] < v[i - 1] : v[i] <= v[i - 1],
              what + (strict ? " must be strictly decreasing" : " must be non-increasing"));
  }
}

FiniteMetricSpace power_of_line(const std::vector<double>& xs, double alpha) {
  const Index n = static_cast<Index>(xs.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = std::pow(std::abs(xs[i] - xs[j]), alpha);
  std::vector<std::string> labels;
  for (double x : xs) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    labels.push_back(os.str());
  }
  return FiniteMetricSpace(std::move(d), std::move(labels));
}

FiniteMetricSpace with_source(FiniteMetricSpace s, const std::string& family,
                              const nlohmann::json& params) {
  return FiniteMetricSpace(s.matrix(), s.labels(), family, ConstructionSource{family, params});
}

std::string word(int m, std::uint64_t v) {
  std::string w(static_cast<std::size_t>(m), '0');
  for (int i = 0; i < m; ++i)
    if (v >> (m - 1 - i) & 1U)
      w[static_cast<std::size_t>(i)] = '1';
  return w;
}

} // namespace

double solve_root_a(double eps, double alpha) {
  require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  auto g = [&](double x) { return std::pow(1.0 - x, alpha) + eps * std::pow(x, alpha) - 1.0; };
  // g rises from g(0) = 0 to its maximum at x0, then falls to eps - 1 < 0
  double lo = 1.0 / (1.0 + std::pow(eps, 1.0 / (alpha - 1.0)));
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

FiniteMetricSpace geometric_sra_sequence(double eps, double alpha, int count) {
  require(count >= 1, "count must be positive");
  const double a = solve_root_a(eps, alpha);
  std::vector<double> xs;
  for (int m = 1; m <= count; ++m)
    xs.push_back(std::pow(a, m));
  return power_of_line(xs, alpha);
}

double eps_prime(double alpha, double a) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require(a > 0.0 && a < 0.5, "a must lie in (0, 1/2)");
  return (std::pow(1.0 - a, alpha) - std::pow(1.0 - 2.0 * a, alpha)) / std::pow(a, alpha);
}

std::vector<double> cantor_endpoints(double a, int level) {
  require(a > 0.0 && a < 0.5, "contraction ratio must lie in (0, 1/2)");
  require(level >= 0 && level <= 20, "level must lie in [0, 20]");
  std::vector<std::pair<double, double>> iv{{0.0, 1.0}};
  for (int l = 0; l < level; ++l) {
    std::vector<std::pair<double, double>> next;
    next.reserve(iv.size() * 2);
    for (const auto& [x, y] : iv)
      next.emplace_back(a * x, a * y);
    for (const auto& [x, y] : iv)
      next.emplace_back(1.0 - a + a * x, 1.0 - a + a * y);
    iv = std::move(next);
  }
  std::vector<double> pts;
  for (const auto& [x, y] : iv) {
    pts.push_back(x);
    pts.push_back(y);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

FiniteMetricSpace cantor_approx(double alpha, double eps, int level) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require(eps < std::exp2(alpha) - 1.0, "eps must be below 2^alpha - 1");
  return power_of_line(cantor_endpoints(solve_root_a(eps, alpha), level), alpha);
}

Rational laakso_distance(int m, std::uint64_t v, std::uint64_t w) {
  require(m >= 1 && m <= 20, "Laakso level must lie in [1, 20]");
  if (v == w)
    return {0, 1};
  const int k = std::bit_width(v ^ w) - 1;
  require(k < m, "word out of range for this level");
  const std::int64_t num = k == 0 ? 6 : 4 * ((std::int64_t{1} << (2 * k)) - 1);
  const std::int64_t den = 3 * (std::int64_t{1} << (2 * m));
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

FiniteMetricSpace laakso_level(int m) {
  require(m >= 1 && m <= 10, "Laakso level must lie in [1, 10]");
  const Index n = Index{1} << m;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::string> labels;
  for (Index v = 0; v < n; ++v) {
    labels.push_back(word(m, static_cast<std::uint64_t>(v)));
    for (Index w = v + 1; w < n; ++w) {
      const Rational r = laakso_distance(m, static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(w));
      d(v, w) = d(w, v) = static_cast<double>(r.num) / static_cast<double>(r.den);
    }
  }
  return FiniteMetricSpace(std::move(d), std::move(labels));
}

FiniteMetricSpace laakso_doubled(int m, double q, double q_prime) {
  const FiniteMetricSpace f = laakso_level(m);
  const Index n = f.size();
  const double cross = std::max(std::abs(q_prime - q), f.matrix().maxCoeff());
  require(cross > 0.0, "copies must be at positive distance");
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(2 * n, 2 * n, cross);
  d.topLeftCorner(n, n) = f.matrix();
  d.bottomRightCorner(n, n) = f.matrix();
  std::vector<std::string> labels;
  for (int c = 0; c < 2; ++c)
    for (const auto& l : f.labels())
      labels.push_back(std::to_string(c) + ":" + l);
  return FiniteMetricSpace(std::move(d), std::move(labels));
}

double tree_distance(std::span<const double> t, const TreePoint& p, const TreePoint& q) {
  const int len = static_cast<int>(t.size());
  require(p.segment >= 0 && p.segment <= len && q.segment >= 0 && q.segment <= len,
          "tree segment out of range");
  auto height = [&](const TreePoint& u) { return u.param * t[static_cast<std::size_t>(u.segment - 1)]; };
  auto foot = [&](const TreePoint& u) { return t[static_cast<std::size_t>(u.segment - 1)]; };
  if (p.segment == 0 && q.segment == 0)
    return std::abs(p.param - q.param);
  if (p.segment == 0)
    return std::abs(foot(q) - p.param) + height(q);
  if (q.segment == 0)
    return std::abs(foot(p) - q.param) + height(p);
  if (p.segment == q.segment)
    return std::abs(height(p) - height(q));
  return height(p) + std::abs(foot(p) - foot(q)) + height(q);
}

MetricTreeSample metric_tree(std::vector<double> t, int samples_per_segment) {
  require(!t.empty(), "tree needs at least one segment");
  require_decreasing(t, true, "tree sequence");
  require(samples_per_segment >= 0, "samples per segment must be non-negative");
  const int s = samples_per_segment;
  MetricTreeSample out;
  if (s > 0)
    for (int i = 0; i <= s; ++i)
      out.points.push_back({0, t[0] * i / s});
  for (int k = 1; k <= static_cast<int>(t.size()); ++k) {
    const int per = std::max(s, 1);
    for (int j = 1; j <= per; ++j)
      out.points.push_back({k, static_cast<double>(j) / per});
    out.apex.push_back(static_cast<Index>(out.points.size()) - 1);
  }
  const Index n = static_cast<Index>(out.points.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::string> labels;
  for (Index i = 0; i < n; ++i) {
    const TreePoint& p = out.points[static_cast<std::size_t>(i)];
    std::ostringstream os;
    os.precision(17);
    os << "C" << p.segment << "@" << p.param;
    labels.push_back(os.str());
    for (Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = tree_distance(t, p, out.points[static_cast<std::size_t>(j)]);
  }
  out.space = FiniteMetricSpace(std::move(d), std::move(labels));
  return out;
}

FiniteMetricSpace hilbert_sequence(std::vector<double> c) {
  require(!c.empty(), "sequence must be non-empty");
  require_decreasing(c, true, "coefficients");
  const Index n = static_cast<Index>(c.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = std::hypot(c[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)]);
  return FiniteMetricSpace(std::move(d));
}

FiniteMetricSpace heisenberg_axis(std::vector<double> ts, double c) {
  require(c > 0.0, "scale must be positive");
  std::vector<double> sorted = ts;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "axis heights must be distinct");
  FiniteMetricSpace s = power_of_line(ts, 0.5);
  return FiniteMetricSpace(c * s.matrix(), s.labels());
}

FiniteMetricSpace no_converse_family(double beta, std::span<const double> deltas, int m_count) {
  require(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
  require(m_count >= 1 && static_cast<std::size_t>(m_count) <= deltas.size(),
          "need at least m_count deltas");
  const auto used = deltas.first(static_cast<std::size_t>(m_count));
  require_decreasing(used, false, "deltas");
  require(used[0] <= 1.0, "deltas must not exceed 1");
  const Index n = 3 * m_count;
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, 2.0);
  std::vector<std::string> labels;
  for (int m = 0; m < m_count; ++m) {
    const Index x = 3 * m, y = x + 1, z = x + 2;
    const double dm = used[static_cast<std::size_t>(m)];
    d(x, x) = d(y, y) = d(z, z) = 0.0;
    d(x, y) = d(y, x) = 1.0;
    d(x, z) = d(z, x) = dm;
    d(y, z) = d(z, y) = 1.0 + beta * dm;
    for (const char* p : {"x", "y", "z"})
      labels.push_back(std::string(p) + std::to_string(m + 1));
  }
  return FiniteMetricSpace(std::move(d), std::move(labels));
}

bool power_triangle_violation(double alpha, double delta, double q) {
  require(q > 0.0, "power must be positive");
  require(delta > 0.0, "delta must be positive");
  return std::expm1(q * std::log1p(alpha * delta)) > std::pow(delta, q);
}

std::optional<int> no_converse_first_violation(double beta, std::span<const double> deltas,
                                               double q) {
  require(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
  for (std::size_t m = 0; m < deltas.size(); ++m)
    if (power_triangle_violation(beta, deltas[m], q))
      return static_cast<int>(m) + 1;
  return std::nullopt;
}

std::array<double, 5> r_restrictions(double alpha) {
  require(alpha > 1.0 / std::sqrt(2.0) && alpha < 1.0, "alpha must lie in (1/sqrt 2, 1)");
  const double a2 = alpha * alpha;
  return {1.0 + 2.0 / alpha,
          1.0 + 1.0 / std::sqrt(2.0),
          1.0 + std::sqrt(1.0 + 1.0 / (8.0 * a2)),
          (4.0 * a2 + 1.0 + alpha * std::sqrt(16.0 * a2 + 10.0)) / (4.0 * a2 - 2.0),
          (2.0 * a2 + 1.0 + alpha * std::sqrt(4.0 * a2 + 6.0)) / (2.0 * a2 - 1.0)};
}

double r_min(double alpha) {
  const auto r = r_restrictions(alpha);
  return *std::max_element(r.begin(), r.end());
}

FiniteMetricSpace hilbert_triangles(double alpha, double R, int m_count,
                                    std::span<const double> deltas) {
  const double rmin = r_min(alpha);
  require(R >= rmin, "R must be at least r_min(alpha)");
  require(m_count >= 1 && static_cast<std::size_t>(m_count) <= deltas.size(),
          "need at least m_count deltas");
  const auto used = deltas.first(static_cast<std::size_t>(m_count));
  require_decreasing(used, false, "deltas");
  require(used[0] <= 1.0, "deltas must not exceed 1");
  const Index dim = 2 * m_count;
  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(3 * m_count, dim);
  std::vector<std::string> labels;
  for (int m = 0; m < m_count; ++m) {
    const double dm = used[static_cast<std::size_t>(m)];
    const double s = (dm * (1.0 - alpha * alpha) - 2.0 * alpha) / 2.0;
    const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
    const Index e1 = 2 * m, e2 = 2 * m + 1;
    coords(3 * m, e1) = R;
    coords(3 * m + 1, e1) = R;
    coords(3 * m + 1, e2) = 1.0;
    coords(3 * m + 2, e1) = R + dm * c;
    coords(3 * m + 2, e2) = dm * s;
    for (const char* p : {"x", "y", "z"})
      labels.push_back(std::string(p) + std::to_string(m + 1));
  }
  return FiniteMetricSpace::from_coordinates(std::move(coords), Norm::euclidean, std::move(labels));
}

double dyadic_distance(double x, int m, double y, int n) {
  require(x >= 0.0 && x < 1.0 && y >= 0.0 && y < 1.0, "dyadic coordinates must lie in [0, 1)");
  require(m >= 0 && n >= 0, "levels must be non-negative");
  if (m != n)
    return std::abs(m - n);
  if (x == y)
    return 0.0;
  int j = 0;
  while (j < 1000 && std::floor(std::ldexp(x, j + 1)) == std::floor(std::ldexp(y, j + 1)))
    ++j;
  const double dinf = std::ldexp(1.0, -j);
  return j >= n ? std::abs(x - y) : dinf;
}

FiniteMetricSpace dyadic_doubling_space(std::span<const int> levels, int resolution) {
  require(resolution >= 1 && std::has_single_bit(static_cast<unsigned>(resolution)),
          "resolution must be a power of two");
  std::vector<int> sorted(levels.begin(), levels.end());
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "levels must be distinct");
  struct P {
    double x;
    int level;
  };
  std::vector<P> pts;
  std::vector<std::string> labels;
  for (int lv : levels)
    for (int k = 0; k < resolution; ++k) {
      pts.push_back({static_cast<double>(k) / resolution, lv});
      labels.push_back(std::to_string(k) + "/" + std::to_string(resolution) + "@" + std::to_string(lv));
    }
  const Index n = static_cast<Index>(pts.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const P& a = pts[static_cast<std::size_t>(i)];
      const P& b = pts[static_cast<std::size_t>(j)];
      d(i, j) = d(j, i) = dyadic_distance(a.x, a.level, b.x, b.level);
    }
  return FiniteMetricSpace(std::move(d), std::move(labels));
}

FiniteMetricSpace simplex_with_center(int n) {
  require(n >= 1, "simplex dimension must be positive");
  const Index pts = n + 1;
  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(pts + 1, pts);
  coords.topRows(pts) = Eigen::MatrixXd::Identity(pts, pts) / std::sqrt(2.0);
  coords.row(pts) = coords.topRows(pts).colwise().mean();
  std::vector<std::string> labels;
  for (Index i = 0; i < pts; ++i)
    labels.push_back("v" + std::to_string(i));
  labels.push_back("center");
  return FiniteMetricSpace::from_coordinates(std::move(coords), Norm::euclidean, std::move(labels));
}

namespace {

std::vector<double> default_deltas(int count) {
  std::vector<double> v;
  for (int m = 1; m <= count; ++m)
    v.push_back(std::ldexp(1.0, -m));
  return v;
}

template <typename T>
T param(const nlohmann::json& p, const char* key) {
  if (!p.contains(key))
    throw ParseError(std::string("construction parameter '") + key + "' is missing");
  try {
    return p.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("construction parameter '") + key + "' has the wrong type");
  }
}

template <typename T>
T param_or(const nlohmann::json& p, const char* key, T fallback) {
  return p.contains(key) ? param<T>(p, key) : fallback;
}

} // namespace

FiniteMetricSpace build(const ConstructionSpec& spec) {
  const std::string& f = spec.family;
  const nlohmann::json& p = spec.params;
  if (!p.is_object())
    throw ParseError("construction params must be a JSON object");
  FiniteMetricSpace s;
  if (f == "geometric_sra_sequence") {
    s = geometric_sra_sequence(param<double>(p, "eps"), param<double>(p, "alpha"), param<int>(p, "count"));
  } else if (f == "cantor_approx") {
    s = cantor_approx(param<double>(p, "alpha"), param<double>(p, "eps"), param<int>(p, "level"));
  } else if (f == "laakso_level") {
    const int m = param<int>(p, "m");
    if (param_or<bool>(p, "doubled", false))
      s = laakso_doubled(m, param_or<double>(p, "q", 6.0 / 16.0), param_or<double>(p, "q_prime", 10.0 / 16.0));
    else
      s = laakso_level(m);
  } else if (f == "metric_tree") {
    std::vector<double> t;
    if (p.contains("t")) {
      t = param<std::vector<double>>(p, "t");
    } else {
      const int count = param<int>(p, "count");
      const std::string rule = param_or<std::string>(p, "rule", "geometric");
      for (int k = 1; k <= count; ++k) {
        if (rule == "geometric")
          t.push_back(std::ldexp(1.0, 1 - k));
        else if (rule == "harmonic")
          t.push_back(1.0 / k);
        else
          throw DomainError("unknown tree rule '" + rule + "'");
      }
    }
    s = metric_tree(std::move(t), param_or<int>(p, "samples_per_segment", 0)).space;
  } else if (f == "hilbert_sequence") {
    std::vector<double> c;
    if (p.contains("c")) {
      c = param<std::vector<double>>(p, "c");
    } else {
      const int count = param<int>(p, "count");
      for (int k = 1; k <= count; ++k)
        c.push_back(1.0 / k);
    }
    s = hilbert_sequence(std::move(c));
  } else if (f == "heisenberg_axis") {
    std::vector<double> ts;
    if (p.contains("ts")) {
      ts = param<std::vector<double>>(p, "ts");
    } else {
      const int count = param<int>(p, "count");
      for (int k = 0; k < count; ++k)
        ts.push_back(k);
    }
    s = heisenberg_axis(std::move(ts), param_or<double>(p, "c", 1.0));
  } else if (f == "no_converse") {
    const int mc = param<int>(p, "m_count");
    const auto deltas = param_or<std::vector<double>>(p, "deltas", default_deltas(mc));
    s = no_converse_family(param<double>(p, "beta"), deltas, mc);
  } else if (f == "dyadic_doubling") {
    const auto levels = param<std::vector<int>>(p, "levels");
    s = dyadic_doubling_space(levels, param<int>(p, "resolution"));
  } else if (f == "hilbert_triangles") {
    const int mc = param<int>(p, "m_count");
    const auto deltas = param_or<std::vector<double>>(p, "deltas", default_deltas(mc));
    s = hilbert_triangles(param<double>(p, "alpha"), param<double>(p, "R"), mc, deltas);
  } else if (f == "simplex_with_center") {
    s = simplex_with_center(param<int>(p, "n"));
  } else {
    throw DomainError("unknown construction family '" + f + "'");
  }
  return with_source(std::move(s), f, p);
}

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{
      "geometric_sra_sequence", "cantor_approx",  "laakso_level",      "metric_tree",
      "hilbert_sequence",       "heisenberg_axis", "no_converse",      "dyadic_doubling",
      "hilbert_triangles",      "simplex_with_center"};
  return names;
}

} // namespace roughmetrics
