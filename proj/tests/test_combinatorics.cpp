#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "qwn/combinatorics.hpp"

using namespace qwn;

namespace {

template <typename F>
std::size_t count(F each, int n) {
  std::size_t c = 0;
  each(n, [&](const auto&) { ++c; });
  return c;
}

double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("set partition counts") {
  CHECK(set_partitions(1).size() == 1);
  CHECK(set_partitions(3).size() == 5);
  CHECK(set_partitions(4).size() == 15);
  CHECK(set_partitions(0).size() == 1);
  for (int n = 0; n <= 8; ++n) {
    CHECK(set_partitions(n).size() == test::brute_set_partitions(n).size());
    CHECK(bell(static_cast<unsigned>(n)) == BigInt(set_partitions(n).size()));
  }
}

TEST_CASE("ordered partitions of 2 listed by hand") {
  const auto ps = ordered_partitions(2);
  REQUIRE(ps.size() == 3);
  std::set<std::vector<std::vector<int>>> got;
  for (const auto& p : ps) got.insert(p.blocks);
  CHECK(got.count({{0}, {1}}) == 1);
  CHECK(got.count({{0, 1}}) == 1);
  CHECK(got.count({{1, 0}}) == 1);
}

TEST_CASE("ordered partition counts") {
  CHECK(ordered_partitions(1).size() == 1);
  CHECK(ordered_partitions(3).size() == 13);
  CHECK(ordered_partitions(4).size() == 73);
  for (int n = 0; n <= 7; ++n) {
    double expected = 0.0;
    for (const auto& p : test::brute_set_partitions(n)) {
      double prod = 1.0;
      for (const auto& b : p) prod *= factorial_d(static_cast<int>(b.size()));
      expected += prod;
    }
    CHECK(static_cast<double>(count(for_each_ordered_partition, n)) == expected);
    CHECK(ordered_partition_count(static_cast<unsigned>(n)).convert_to<double>() == expected);
  }
}

TEST_CASE("ordered partitions are distinct and cover the ground set") {
  for (int n = 1; n <= 5; ++n) {
    std::set<std::vector<std::vector<int>>> seen;
    for_each_ordered_partition(n, [&](const OrderedPartition& p) {
      std::vector<int> all;
      for (const auto& b : p.blocks) {
        CHECK(!b.empty());
        all.insert(all.end(), b.begin(), b.end());
      }
      std::sort(all.begin(), all.end());
      std::vector<int> want(static_cast<std::size_t>(n));
      std::iota(want.begin(), want.end(), 0);
      CHECK(all == want);
      CHECK(seen.insert(p.blocks).second);
    });
  }
}

TEST_CASE("interval compositions") {
  CHECK(count(for_each_interval_composition, 1) == 1);
  CHECK(count(for_each_interval_composition, 3) == 4);
  CHECK(count(for_each_interval_composition, 4) == 8);
  for_each_interval_composition(5, [](const IntervalComposition& c) {
    CHECK(c.cuts.front() == 0);
    CHECK(c.cuts.back() == 5);
    CHECK(std::is_sorted(c.cuts.begin(), c.cuts.end()));
    CHECK(std::adjacent_find(c.cuts.begin(), c.cuts.end()) == c.cuts.end());
  });
}

TEST_CASE("noncrossing partitions") {
  CHECK(noncrossing_partitions(3).size() == 5);
  CHECK(noncrossing_partitions(4).size() == 14);
  CHECK(noncrossing_partitions(5).size() == 42);
  for (int n = 0; n <= 8; ++n) {
    std::size_t brute = 0;
    for (const auto& p : test::brute_set_partitions(n)) brute += test::brute_noncrossing(p, n) ? 1 : 0;
    CHECK(noncrossing_partitions(n).size() == brute);
    for (const auto& p : noncrossing_partitions(n)) CHECK(test::brute_noncrossing(p.blocks, n));
  }
}

TEST_CASE("noncrossing predicate against the O(n^4) scan") {
  for (int n = 0; n <= 7; ++n) {
    for (const auto& p : test::brute_set_partitions(n)) CHECK(is_noncrossing(p, n) == test::brute_noncrossing(p, n));
  }
  CHECK_FALSE(is_noncrossing({{0, 2}, {1, 3}}, 4));
  CHECK(is_noncrossing({{0, 3}, {1, 2}}, 4));
}

TEST_CASE("catalan and binomial") {
  CHECK(catalan(0) == 1);
  CHECK(catalan(3) == 5);
  CHECK(catalan(10) == 16796);
  for (int l = 0; l <= 15; ++l) CHECK(catalan(static_cast<unsigned>(l)).convert_to<double>() == test::brute_catalan(l));
  CHECK(binomial(10, 3) == 120);
  CHECK(factorial(20) == BigInt("2432902008176640000"));
  CHECK(factorial(25) == BigInt("15511210043330985984000000"));
}

TEST_CASE("cumulant weight") {
  CHECK(cumulant_weight(2, 7.5) == doctest::Approx(1.0));
  CHECK(cumulant_weight(3, 2.0) == doctest::Approx(2.0));
  CHECK(cumulant_weight(1, 5.0) == 0.0);
  for (int n = 2; n <= 10; ++n) {
    for (double s : {0.0, 0.5, -1.3, 2.0}) {
      double want = 0.0;
      for (int l = 0; 2 * l <= n - 2; ++l) want += test::brute_catalan(l) * test::brute_binomial(n - 2, 2 * l) * std::pow(s, n - 2 * l - 2);
      CHECK(cumulant_weight(n, s) == doctest::Approx(want).epsilon(1e-12));
    }
  }
  // Exact in big rationals.
  CHECK(cumulant_weight<BigInt>(6, BigInt(3)) == BigInt(81 + 6 * 9 + 2 * 1));
}

TEST_CASE("inversion counts") {
  std::mt19937_64 rng(3);
  for (int n = 0; n <= 9; ++n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    for (int t = 0; t < 20; ++t) {
      std::shuffle(p.begin(), p.end(), rng);
      CHECK(inversion_count(p) == test::brute_inversions(p));
    }
  }
  std::vector<int> rev{4, 3, 2, 1, 0};
  CHECK(inversion_count(rev) == 10);
}

TEST_CASE("moment and free cumulant transforms") {
  // Semicircle: m_{2j} = Catalan(j), odd moments zero.
  std::vector<double> semi;
  for (int n = 1; n <= 10; ++n) semi.push_back(n % 2 ? 0.0 : test::brute_catalan(n / 2));
  const auto k = moments_to_free_cumulants<double>(semi);
  for (std::size_t i = 0; i < k.size(); ++i) CHECK(k[i] == doctest::Approx(i == 1 ? 1.0 : 0.0));
  CHECK(moments_to_free_cumulants<double>(std::vector<double>{2.5})[0] == 2.5);
  const auto k2 = moments_to_free_cumulants<double>(std::vector<double>{1.0, 1.0});
  CHECK(k2[0] == 1.0);
  CHECK(k2[1] == 0.0);
  // Free Poisson of rate 1: all cumulants 1, moments Catalan numbers C_n.
  const auto m = free_cumulants_to_moments<double>(std::vector<double>(8, 1.0));
  for (int n = 1; n <= 8; ++n) CHECK(m[static_cast<std::size_t>(n - 1)] == test::brute_catalan(n));
}

TEST_CASE("transforms are inverse on exact integers") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int t = 0; t < 30; ++t) {
    std::vector<BigInt> k;
    for (int i = 0; i < 8; ++i) k.push_back(d(rng));
    const auto m = free_cumulants_to_moments<BigInt>(k);
    CHECK(moments_to_free_cumulants<BigInt>(m) == k);
  }
}

TEST_CASE("multivariate cumulant extraction") {
  // For a single variable the multivariate recursion reduces to the univariate one.
  const std::vector<double> moments{0.3, 1.7, -0.4, 5.0, 2.2};
  const auto k = moments_to_free_cumulants<double>(moments);
  for (int n = 1; n <= 5; ++n) {
    const cplx got = free_cumulant_from_moments(n, [&](const std::vector<int>& s) -> cplx {
      return s.empty() ? 1.0 : moments[s.size() - 1];
    });
    CHECK(std::abs(got - k[static_cast<std::size_t>(n - 1)]) < 1e-12);
  }
}

TEST_CASE("commutative reduction of the ordered-partition sum") {
  std::mt19937_64 rng(21);
  const Algebra alg = test::random_functions(rng, 3);
  const double g0 = 0.8;
  for (int n = 1; n <= 6; ++n) {
    std::vector<Element> x;
    for (int i = 0; i < n; ++i) x.push_back(alg.random(rng));
    auto block_state = [&](const std::vector<int>& b) {
      Element p = x[static_cast<std::size_t>(b[0])];
      for (std::size_t j = 1; j < b.size(); ++j) p = p * x[static_cast<std::size_t>(b[j])];
      return alg.state(p);
    };
    cplx ordered = 0.0, reduced = 0.0;
    for_each_ordered_partition(n, [&](const OrderedPartition& p) {
      cplx t = 1.0;
      for (const auto& b : p.blocks) t *= g0 / static_cast<double>(b.size()) * block_state(b);
      ordered += t;
    });
    for (const auto& p : test::brute_set_partitions(n)) {
      cplx t = 1.0;
      for (const auto& b : p) t *= g0 * factorial_d(static_cast<int>(b.size()) - 1) * block_state(b);
      reduced += t;
    }
    CHECK(test::rel(ordered, reduced) < 1e-10);
  }
}

TEST_CASE("enumerator caps") {
  CHECK_THROWS_AS(for_each_ordered_partition(kMaxOrderedPartitionSize + 1, [](const OrderedPartition&) {}), Error);
  CHECK_THROWS_AS(for_each_set_partition(kMaxSetPartitionSize + 1, [](const SetPartition&) {}), Error);
  CHECK_THROWS_AS(for_each_noncrossing_partition(-1, [](const NoncrossingPartition&) {}), Error);
}
