#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "qwn/algebra.hpp"
#include "qwn/fock.hpp"

namespace qwn::test {

inline Algebra random_functions(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> w(0.2, 1.5);
  std::vector<double> weights;
  for (int i = 0; i < d; ++i) weights.push_back(w(rng));
  return Algebra::functions(PointMeasureSpace(weights));
}

// Coordinates of x_1 (x) ... (x) x_k, first slot most significant.
inline VectorXc tensor(const Algebra& alg, const std::vector<Element>& xs) {
  VectorXc v = VectorXc::Ones(1);
  for (const auto& x : xs) {
    const VectorXc c = alg.coordinates(x);
    VectorXc next(v.size() * c.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * c.size(), c.size()) = v(i) * c;
    v = next;
  }
  return v;
}

inline GradedVector at_grade(const FockSpace& fock, int k, const VectorXc& coeffs) {
  GradedVector v = fock.zero();
  v.grade(k) = coeffs;
  return v;
}

// Weighted sum of the values of a function-algebra element.
inline cplx integrate(const Algebra& alg, const Element& f) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < alg.order(); ++i) {
    s += alg.space().weight(i) * f.value()(static_cast<Eigen::Index>(i), 0);
  }
  return s;
}

inline double rel(cplx got, cplx want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

// Compositions of k as block sizes, by bitmask over the k-1 gaps.
inline std::vector<std::vector<int>> compositions(int k) {
  std::vector<std::vector<int>> out;
  if (k == 0) return {{}};
  for (int mask = 0; mask < (1 << (k - 1)); ++mask) {
    std::vector<int> sizes{1};
    for (int g = 0; g < k - 1; ++g) {
      if (mask & (1 << g)) sizes.push_back(1);
      else ++sizes.back();
    }
    out.push_back(sizes);
  }
  return out;
}

// Restricted growth strings: every set partition of n exactly once.
inline std::vector<std::vector<std::vector<int>>> brute_set_partitions(int n) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int i, int maxv) -> void {
    if (i == n) {
      std::vector<std::vector<int>> blocks(static_cast<std::size_t>(maxv + 1));
      for (int j = 0; j < n; ++j) blocks[static_cast<std::size_t>(a[static_cast<std::size_t>(j)])].push_back(j);
      if (n == 0) blocks.clear();
      out.push_back(blocks);
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      a[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, std::max(maxv, v));
    }
  };
  if (n == 0) {
    out.push_back({});
    return out;
  }
  a[0] = 0;
  rec(rec, 1, 0);
  return out;
}

// O(n^4) scan: a < b < c < d with a, c in one block and b, d in another.
inline bool brute_noncrossing(const std::vector<std::vector<int>>& blocks, int n) {
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (int x : blocks[b]) owner[static_cast<std::size_t>(x)] = static_cast<int>(b);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          const auto o = [&](int i) { return owner[static_cast<std::size_t>(i)]; };
          if (o(a) == o(c) && o(b) == o(d) && o(a) != o(b)) return false;
        }
  return true;
}

inline long long brute_inversions(const std::vector<int>& p) {
  long long c = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) c += p[i] > p[j] ? 1 : 0;
  return c;
}

inline double brute_catalan(int l) {
  double c = 1.0;
  for (int i = 0; i < l; ++i) c = c * 2.0 * (2.0 * i + 1.0) / (i + 2.0);
  return c;
}

inline double brute_binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace qwn::test
