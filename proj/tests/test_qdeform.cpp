#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "helpers.hpp"
#include "qwn/linalg.hpp"
#include "qwn/qdeform.hpp"
#include "qwn/tensor.hpp"

using namespace qwn;
using K = OperatorKind;

namespace {

// <e_I, e_J> = sum over sigma with J[sigma(r)] = I[r] of q^inv(sigma) prod w.
MatrixXc oracle_gram(const PointMeasureSpace& m, double q, int k) {
  const TensorBasis basis(m.size(), k);
  const auto n = static_cast<Eigen::Index>(basis.size());
  MatrixXc g = MatrixXc::Zero(n, n);
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const auto I = basis.multi_index(r);
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const auto J = basis.multi_index(c);
      std::vector<int> sigma(static_cast<std::size_t>(k));
      std::iota(sigma.begin(), sigma.end(), 0);
      do {
        bool match = true;
        double w = 1.0;
        for (int i = 0; i < k; ++i) {
          match = match && J[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])] == I[static_cast<std::size_t>(i)];
          w *= m.weight(static_cast<std::size_t>(I[static_cast<std::size_t>(i)]));
        }
        if (match) g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += std::pow(q, test::brute_inversions(sigma)) * w;
      } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
  }
  return g;
}

MatrixXc compose(const QFock& f, K outer_kind, const Element& outer, K inner_kind, const Element& inner, int k) {
  return f.block(outer_kind, outer, k + grade_shift(inner_kind)) * f.block(inner_kind, inner, k);
}

}  // namespace

TEST_CASE("Gram against the permutation oracle") {
  std::mt19937_64 rng(1);
  const PointMeasureSpace m = test::random_functions(rng, 2).space();
  for (double q : {-0.5, 0.0, 0.5, 1.0}) {
    const QFock fock({q, 4, m});
    for (int k = 0; k <= 4; ++k) CHECK(max_abs(fock.gram(k) - oracle_gram(m, q, k)) < 1e-12);
  }
}

TEST_CASE("vacuum and free cases") {
  std::mt19937_64 rng(2);
  const Algebra alg = test::random_functions(rng, 2);
  for (double q : {-0.5, 0.0, 0.5, 1.0}) {
    const QFock fock({q, 4, alg.space()});
    const Element phi = alg.random(rng), psi = alg.random(rng);
    const GradedVector v = fock.apply(K::annihilation, phi, fock.apply(K::creation, psi, fock.vacuum()));
    CHECK(std::abs(v.grade(0)(0) - alg.inner(phi, psi)) < 1e-14);
    CHECK_THROWS_AS(fock.block(K::number, phi, 1), Error);
  }
  const QFock free({0.0, 4, alg.space()});
  const Element phi = alg.random(rng), psi = alg.random(rng);
  for (int k = 0; k < 4; ++k) {
    const MatrixXc aa = compose(free, K::annihilation, phi, K::creation, psi, k);
    CHECK(max_abs(aa - alg.inner(phi, psi) * MatrixXc::Identity(aa.rows(), aa.cols())) < 1e-14);
  }
  for (int k = 0; k + 2 <= 4; ++k) {
    const MatrixXc a2 = free.block(K::annihilation, phi, k + 1) * free.block(K::annihilation, phi, k + 2) *
                        free.block(K::creation, psi, k + 1) * free.block(K::creation, psi, k);
    const cplx z = alg.inner(phi, psi);
    CHECK(max_abs(a2 - z * z * MatrixXc::Identity(a2.rows(), a2.cols())) < 1e-12);
  }
  CHECK_THROWS_AS(QFock({-1.0, 3, alg.space()}), Error);
  CHECK_THROWS_AS(QFock({1.5, 3, alg.space()}), Error);
}

TEST_CASE("single-mode bosonic limit") {
  const Algebra one = Algebra::functions(PointMeasureSpace({1.0}));
  const QFock fock({1.0, 5, one.space()});
  const Element u = one.unit();
  for (int k = 0; k < 5; ++k) {
    MatrixXc c = compose(fock, K::annihilation, u, K::creation, u, k);
    if (k > 0) c -= compose(fock, K::creation, u, K::annihilation, u, k);
    CHECK(std::abs(c(0, 0) - 1.0) < 1e-14);
  }
  // [a^2, a*^2] = 2 + 4 a* a on grades <= N - 2.
  for (int k = 0; k + 2 <= 5; ++k) {
    const MatrixXc up = fock.block(K::annihilation, u, k + 1) * fock.block(K::annihilation, u, k + 2) *
                        fock.block(K::creation, u, k + 1) * fock.block(K::creation, u, k);
    MatrixXc comm = up;
    if (k >= 2) {
      comm -= fock.block(K::creation, u, k - 1) * fock.block(K::creation, u, k - 2) * fock.block(K::annihilation, u, k - 1) *
              fock.block(K::annihilation, u, k);
    }
    const cplx want = 2.0 + 4.0 * static_cast<double>(k);
    CHECK(std::abs(comm(0, 0) - want) < 1e-12);
  }
}

TEST_CASE("relations at several q") {
  std::mt19937_64 rng(3);
  for (double q : {-0.5, 0.0, 0.5, 1.0}) {
    for (int d = 1; d <= 2; ++d) {
      const Algebra alg = test::random_functions(rng, d);
      const QFock fock({q, 4, alg.space()});
      for (int t = 0; t < 10; ++t) {
        const Element phi = alg.random(rng), psi = alg.random(rng);
        for (const auto& r : check_q_relation(fock, phi, psi)) CHECK(r.status == Status::pass);
        CHECK(check_squared_relation(fock, phi, psi).status == Status::pass);
        CHECK(check_q_adjointness(fock, phi).status == Status::pass);
        // a_phi a*_psi - q a*_psi a_phi = <phi, psi>, by hand on every grade below N.
        for (int k = 0; k < 4; ++k) {
          MatrixXc c = compose(fock, K::annihilation, phi, K::creation, psi, k);
          if (k > 0) c -= q * compose(fock, K::creation, psi, K::annihilation, phi, k);
          CHECK(max_abs(c - alg.inner(phi, psi) * MatrixXc::Identity(c.rows(), c.cols())) < 1e-12);
        }
      }
      CHECK(check_q_positivity(fock).status == Status::pass);
    }
  }
}

TEST_CASE("adjointness and positivity by hand") {
  std::mt19937_64 rng(4);
  const Algebra alg = test::random_functions(rng, 2);
  for (double q : {-0.5, 0.0, 0.5}) {
    const QFock fock({q, 4, alg.space()});
    for (int k = 0; k <= 4; ++k) CHECK(min_hermitian_eigenvalue(fock.gram(k)) > 0.0);
    const Element z = alg.random(rng);
    for (int k = 0; k < 4; ++k) {
      const MatrixXc lhs = fock.block(K::annihilation, z, k + 1).adjoint() * fock.gram(k);
      const MatrixXc rhs = fock.gram(k + 1) * fock.block(K::creation, z, k);
      CHECK(max_abs(lhs - rhs) < 1e-10);
    }
  }
  // The symmetrizer at q = 1 is singular on the full space.
  const QFock sym({1.0, 3, alg.space()});
  CHECK(min_hermitian_eigenvalue(sym.gram(2)) < 1e-12);
}

TEST_CASE("block structures") {
  const PointMeasureSpace m({0.2, 0.3, 0.1, 0.4});
  CHECK_NOTHROW(validate_blocks(m, {0.5, {{0, 1}, {2, 3}}}));
  CHECK_THROWS_AS(validate_blocks(m, {0.5, {{0, 1}, {1, 3}}}), Error);
  CHECK_THROWS_AS(validate_blocks(m, {0.5, {{0, 2}, {1, 3}}}), Error);
  CHECK_THROWS_AS(validate_blocks(m, {0.5, {{0, 1}, {2, 7}}}), Error);
  const QFock fock({0.5, 3, m});
  const ModeBlocks mb{0.5, {{0, 1}, {2, 3}}};
  const VectorXc vals{{2.0, -1.0}};
  const Element f = piecewise(fock, mb, vals);
  CHECK((block_values(fock, mb, f) - vals).norm() < 1e-15);
  CHECK_THROWS_AS(block_values(fock, mb, fock.algebra().from_values(VectorXc{{1.0, 2.0, 0.0, 0.0}})), Error);
}

TEST_CASE("squared relation on piecewise-constant vectors") {
  std::mt19937_64 rng(5);
  for (double q : {-0.5, 0.0, 0.5, 1.0}) {
    for (double l : {0.5, 1.0, 1.7}) {
      const std::vector<double> w{0.3 * l, 0.7 * l, 0.45 * l, 0.55 * l};
      const QFock fock({q, 4, PointMeasureSpace(w)});
      const ModeBlocks mb{l, {{0, 1}, {2, 3}}};
      const VectorXc pv = random_vector(rng, 2), sv = random_vector(rng, 2);
      const Element phi = piecewise(fock, mb, pv), psi = piecewise(fock, mb, sv);
      for (const auto& r : check_discretized_sss(fock, mb, phi, psi)) CHECK(r.status == Status::pass);
      // Vacuum element by hand: (1 + q)/l times the integral of psi conj(phi).
      GradedVector v = fock.zero();
      for (int i = 0; i < 2; ++i) {
        const Element chi = (1.0 / std::sqrt(l)) * piecewise(fock, mb, VectorXc::Unit(2, i));
        v += sv(i) * fock.apply(K::creation, chi, fock.apply(K::creation, chi, fock.vacuum()));
      }
      cplx value = 0.0;
      for (int i = 0; i < 2; ++i) {
        const Element chi = (1.0 / std::sqrt(l)) * piecewise(fock, mb, VectorXc::Unit(2, i));
        value += std::conj(pv(i)) * fock.apply(K::annihilation, chi, fock.apply(K::annihilation, chi, v)).grade(0)(0);
      }
      const cplx integral = l * (sv.array() * pv.conjugate().array()).sum();
      CHECK(test::rel(value, (1.0 + q) / l * integral) < 1e-12);
    }
  }
}
