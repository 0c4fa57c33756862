#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace roughmetrics {

using Index = Eigen::Index;

/// Three point indices. For SRA reports (i, j) is the endpoint pair and
/// k the middle point; for ordered sets the positions satisfy i < j < k.
struct Triple {
  Index i = -1;
  Index j = -1;
  Index k = -1;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Smallest alpha >= 0 with dxy <= max(dxz + alpha*dzy, alpha*dxz + dzy).
template <typename Scalar>
Scalar sra_kernel(Scalar dxy, Scalar dxz, Scalar dzy) {
  const Scalar hi = std::max(dxz, dzy);
  const Scalar lo = std::min(dxz, dzy);
  if (dxy <= hi)
    return Scalar(0);
  if (lo <= Scalar(0))
    return std::numeric_limits<Scalar>::infinity();
  return (dxy - hi) / lo;
}

/// Required alpha of the unordered triple {a, b, c}: the worst of its
/// three role assignments. `roles` receives the worst assignment.
template <typename Derived>
typename Derived::Scalar triple_required_alpha(const Eigen::MatrixBase<Derived>& d, Index a,
                                               Index b, Index c, Triple* roles = nullptr) {
  using Scalar = typename Derived::Scalar;
  const std::array<Triple, 3> assignments{{{a, b, c}, {a, c, b}, {b, c, a}}};
  Scalar best = Scalar(-1);
  for (const Triple& t : assignments) {
    const Scalar v = sra_kernel<Scalar>(d(t.i, t.j), d(t.i, t.k), d(t.k, t.j));
    if (v > best) {
      best = v;
      if (roles)
        *roles = t;
    }
  }
  return best;
}

/// Least alpha for which the whole matrix satisfies SRA(alpha).
/// Ties in the argmax go to the lexicographically first triple.
template <typename Derived>
typename Derived::Scalar sra_required_alpha(const Eigen::MatrixBase<Derived>& d,
                                            Triple* argmax = nullptr) {
  using Scalar = typename Derived::Scalar;
  const Index n = d.rows();
  Scalar best = Scalar(0);
  bool first = true;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      for (Index c = b + 1; c < n; ++c) {
        Triple roles;
        const Scalar v = triple_required_alpha(d, a, b, c, &roles);
        if (first || v > best) {
          best = v;
          first = false;
          if (argmax)
            *argmax = roles;
        }
      }
  return best;
}

/// Exponent p solving (a/c)^p + (b/c)^p = 1 where c is the largest side.
/// Infinite when the triangle is degenerate in the ultrametric sense
/// (largest side repeated) or when p would exceed `cap`.
template <typename Scalar>
Scalar triangle_lp_exponent(Scalar a, Scalar b, Scalar c, Scalar cap = Scalar(64)) {
  std::array<Scalar, 3> s{a, b, c};
  std::sort(s.begin(), s.end());
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  if (s[2] == s[1])
    return inf;
  const Scalar x = s[0] / s[2];
  const Scalar y = s[1] / s[2];
  auto f = [&](Scalar p) { return std::pow(x, p) + std::pow(y, p) - Scalar(1); };
  if (f(Scalar(1)) <= Scalar(0))
    return Scalar(1);
  if (f(cap) > Scalar(0))
    return inf;
  Scalar lo = Scalar(1);
  Scalar hi = cap;
  for (int it = 0; it < 200 && hi - lo > Scalar(1e-14) * hi; ++it) {
    const Scalar mid = (lo + hi) / 2;
    if (f(mid) > Scalar(0))
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

/// (d(b,c) - d(a,c)) / d(a,b) for positions a < b < c.
template <typename Derived>
typename Derived::Scalar contracting_kernel(const Eigen::MatrixBase<Derived>& d, Index a,
                                            Index b, Index c) {
  return (d(b, c) - d(a, c)) / d(a, b);
}

/// (d(a,b) - d(a,c)) / d(b,c) for positions a < b < c.
template <typename Derived>
typename Derived::Scalar expanding_kernel(const Eigen::MatrixBase<Derived>& d, Index a,
                                          Index b, Index c) {
  return (d(a, b) - d(a, c)) / d(b, c);
}

/// (d(a,c) - d(a,b)) / d(b,c) for positions a < b < c.
template <typename Derived>
typename Derived::Scalar medial_kernel(const Eigen::MatrixBase<Derived>& d, Index a, Index b,
                                       Index c) {
  return (d(a, c) - d(a, b)) / d(b, c);
}

} // namespace roughmetrics
