#pragma once

#include <cstdint>
#include <functional>
#include <type_traits>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qwn/types.hpp"

namespace qwn {

using BigInt = boost::multiprecision::cpp_int;

// All partition types index the ground set {0, ..., n-1}.

/// Blocks sorted internally and ordered by their smallest element.
struct SetPartition {
  std::vector<std::vector<int>> blocks;
};

/// Blocks carry an internal order; the family of blocks is canonicalized by
/// smallest element.
struct OrderedPartition {
  std::vector<std::vector<int>> blocks;
};

/// Cut points 0 = n_0 < n_1 < ... < n_m = k; block p is [n_{p-1}, n_p).
struct IntervalComposition {
  std::vector<int> cuts;
  std::size_t block_count() const { return cuts.size() - 1; }
};

struct NoncrossingPartition {
  std::vector<std::vector<int>> blocks;
};

inline constexpr int kMaxSetPartitionSize = 12;
inline constexpr int kMaxOrderedPartitionSize = 9;
inline constexpr int kMaxNoncrossingSize = 12;
inline constexpr int kMaxCompositionSize = 24;

// Enumerators are lazy: each visits one partition at a time and never
// materializes the family. n = 0 visits the single empty partition.
void for_each_set_partition(int n, const std::function<void(const SetPartition&)>& visit);
void for_each_ordered_partition(int n, const std::function<void(const OrderedPartition&)>& visit);
void for_each_interval_composition(int k,
                                   const std::function<void(const IntervalComposition&)>& visit);
void for_each_noncrossing_partition(int n,
                                    const std::function<void(const NoncrossingPartition&)>& visit);

std::vector<SetPartition> set_partitions(int n);
std::vector<OrderedPartition> ordered_partitions(int n);
std::vector<NoncrossingPartition> noncrossing_partitions(int n);

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);
BigInt catalan(unsigned l);
BigInt bell(unsigned n);
/// Number of ordered partitions: sum over set partitions of prod n_p!.
BigInt ordered_partition_count(unsigned n);

/// Stack-based noncrossing test, O(n) after sorting by element.
bool is_noncrossing(const std::vector<std::vector<int>>& blocks, int n);

/// Number of pairs i < j with perm[i] > perm[j] (merge-sort count).
std::int64_t inversion_count(std::span<const int> perm);

template <typename Scalar>
Scalar from_bigint(const BigInt& value) {
  if constexpr (std::is_constructible_v<Scalar, BigInt>) {
    return Scalar(value);
  } else {
    return Scalar(value.convert_to<double>());
  }
}

/// sum_{l >= 0, 2l <= n-2} Catalan(l) C(n-2, 2l) s^{n-2l-2}; zero for n < 2.
template <typename Scalar>
Scalar cumulant_weight(int n, const Scalar& s) {
  Scalar total = Scalar(0);
  if (n < 2) return total;
  for (int l = 0; 2 * l <= n - 2; ++l) {
    const BigInt coeff = catalan(static_cast<unsigned>(l)) *
                         binomial(static_cast<unsigned>(n - 2), static_cast<unsigned>(2 * l));
    Scalar power = Scalar(1);
    for (int i = 0; i < n - 2 * l - 2; ++i) power *= s;
    total += from_bigint<Scalar>(coeff) * power;
  }
  return total;
}

/// Univariate moment -> free cumulant transform. moments[j] is m_{j+1}.
/// Uses m_n = sum_{s=1}^{n} k_s sum_{i_1+..+i_s = n-s} m_{i_1}...m_{i_s}.
template <typename Scalar>
std::vector<Scalar> moments_to_free_cumulants(std::span<const Scalar> moments);

/// Inverse of moments_to_free_cumulants.
template <typename Scalar>
std::vector<Scalar> free_cumulants_to_moments(std::span<const Scalar> cumulants);

namespace detail {
// c[j] = coefficient table: sum over compositions of `total` into `parts`
// nonnegative pieces of prod m_{i} with m_0 = 1. Returned as table[parts][total].
template <typename Scalar>
std::vector<std::vector<Scalar>> composition_products(const std::vector<Scalar>& m0, int n) {
  std::vector<std::vector<Scalar>> table(static_cast<std::size_t>(n + 1),
                                         std::vector<Scalar>(static_cast<std::size_t>(n + 1), Scalar(0)));
  table[0][0] = Scalar(1);
  for (int parts = 1; parts <= n; ++parts) {
    for (int total = 0; total <= n; ++total) {
      Scalar acc = Scalar(0);
      for (int first = 0; first <= total; ++first) {
        if (first >= static_cast<int>(m0.size())) break;
        acc += m0[static_cast<std::size_t>(first)] *
               table[static_cast<std::size_t>(parts - 1)][static_cast<std::size_t>(total - first)];
      }
      table[static_cast<std::size_t>(parts)][static_cast<std::size_t>(total)] = acc;
    }
  }
  return table;
}
}  // namespace detail

template <typename Scalar>
std::vector<Scalar> moments_to_free_cumulants(std::span<const Scalar> moments) {
  const int n = static_cast<int>(moments.size());
  std::vector<Scalar> m0{Scalar(1)};
  m0.insert(m0.end(), moments.begin(), moments.end());
  std::vector<Scalar> k(static_cast<std::size_t>(n), Scalar(0));
  // Solve for k_n using the lower cumulants; the s = n term is k_n * 1.
  for (int order = 1; order <= n; ++order) {
    std::vector<Scalar> prefix(m0.begin(), m0.begin() + order);
    const auto table = detail::composition_products(prefix, order);
    Scalar rest = Scalar(0);
    for (int s = 1; s < order; ++s) {
      rest += k[static_cast<std::size_t>(s - 1)] *
              table[static_cast<std::size_t>(s)][static_cast<std::size_t>(order - s)];
    }
    k[static_cast<std::size_t>(order - 1)] = m0[static_cast<std::size_t>(order)] - rest;
  }
  return k;
}

template <typename Scalar>
std::vector<Scalar> free_cumulants_to_moments(std::span<const Scalar> cumulants) {
  const int n = static_cast<int>(cumulants.size());
  std::vector<Scalar> m0{Scalar(1)};
  for (int order = 1; order <= n; ++order) {
    const auto table = detail::composition_products(m0, order);
    Scalar total = Scalar(0);
    for (int s = 1; s <= order; ++s) {
      total += cumulants[static_cast<std::size_t>(s - 1)] *
               table[static_cast<std::size_t>(s)][static_cast<std::size_t>(order - s)];
    }
    m0.push_back(total);
  }
  return {m0.begin() + 1, m0.end()};
}

/// Multivariate free cumulant k(x_0, ..., x_{n-1}) from a mixed-moment oracle,
/// by inverting m(S) = sum over noncrossing partitions of S of prod k(block).
/// `moment` receives an increasing list of positions into the tuple.
cplx free_cumulant_from_moments(int n,
                                const std::function<cplx(const std::vector<int>&)>& moment);

}  // namespace qwn
