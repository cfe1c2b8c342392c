#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qwn/algebra.hpp"

using namespace qwn;

TEST_CASE("pointwise and matrix products") {
  const Algebra f = Algebra::functions(PointMeasureSpace({1.0, 1.0}));
  const Element x = f.from_values(VectorXc{{1.0, 2.0}});
  const Element y = f.from_values(VectorXc{{3.0, 0.0}});
  CHECK((x * y).value() == MatrixXc(VectorXc{{3.0, 0.0}}));
  CHECK(x * f.unit() == x);

  const Algebra m = Algebra::matrices(2);
  MatrixXc a = MatrixXc::Zero(2, 2), b = MatrixXc::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  b(0, 0) = 3.0;
  b(1, 1) = 4.0;
  const MatrixXc p = (m.from_matrix(a) * m.from_matrix(b)).value();
  CHECK(p(0, 0) == cplx(3.0));
  CHECK(p(1, 1) == cplx(8.0));
  CHECK(p(0, 1) == cplx(0.0));
}

TEST_CASE("states") {
  const Algebra f = Algebra::functions(PointMeasureSpace({0.5, 0.5}));
  CHECK(f.state(f.from_values(VectorXc{{2.0, 4.0}})) == cplx(3.0));
  CHECK(Algebra::functions(PointMeasureSpace({1.0, 1.0})).state(Algebra::functions(PointMeasureSpace({1.0, 1.0})).unit()) ==
        cplx(2.0));
  const Algebra m = Algebra::matrices(2);
  MatrixXc d = MatrixXc::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 3.0;
  CHECK(m.state(m.from_matrix(d)) == cplx(2.0));
  CHECK(m.state(m.unit()) == cplx(1.0));
}

TEST_CASE("norms") {
  const Algebra f = Algebra::functions(PointMeasureSpace({1.0, 1.0}));
  CHECK(f.l2_norm(f.from_values(VectorXc{{1.0, 1.0}})) == doctest::Approx(std::sqrt(2.0)));
  CHECK(f.l_inf_norm(f.from_values(VectorXc{{3.0, -1.0}})) == doctest::Approx(3.0));
  CHECK(Algebra::matrices(3).l_inf_norm(Algebra::matrices(3).unit()) == doctest::Approx(1.0));
  // The literal sup |mu(xy)| over unit y is the L2 norm in the commutative case.
  const Element x = f.from_values(VectorXc{{3.0, -1.0}});
  CHECK(f.l_inf_norm_literal(x) == doctest::Approx(f.l2_norm(x)));
}

TEST_CASE("point weights are validated") {
  CHECK_THROWS_AS(PointMeasureSpace({1.0, 0.0}), Error);
  CHECK_THROWS_AS(PointMeasureSpace(std::vector<double>{}), Error);
  CHECK(PointMeasureSpace({0.25, 0.5}).total_mass() == doctest::Approx(0.75));
}

TEST_CASE("mismatched elements are rejected") {
  const Algebra f = Algebra::functions(PointMeasureSpace({1.0, 1.0}));
  const Algebra g = Algebra::functions(PointMeasureSpace({1.0, 1.0, 1.0}));
  CHECK_THROWS_AS(f.unit() * g.unit(), Error);
  CHECK_THROWS_AS(f.state(g.unit()), Error);
  CHECK_THROWS_AS(f.from_matrix(MatrixXc::Identity(2, 2)), Error);
}

TEST_CASE("state properties on random elements") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    for (const Algebra& alg : {test::random_functions(rng, 3), Algebra::matrices(2), Algebra::matrices(3)}) {
      const Element x = alg.random(rng), y = alg.random(rng);
      CHECK(star(star(x)) == x);
      CHECK(alg.state(star(x) * x).real() >= 0.0);
      CHECK(std::abs(alg.state(star(x) * x).imag()) < 1e-12);
      CHECK(std::abs(alg.inner(x, y)) <= alg.l2_norm(x) * alg.l2_norm(y) * (1 + 1e-12));
      CHECK(alg.l2_norm(x * y) <= alg.l_inf_norm(x) * alg.l2_norm(y) * (1 + 1e-9));
      CHECK(std::abs(alg.state(x * y) - alg.state(y * x)) < 1e-12);
      if (alg.is_commutative()) CHECK(x * y == y * x);
    }
  }
}

TEST_CASE("l_inf of a function is the largest modulus") {
  std::mt19937_64 rng(5);
  const Algebra f = test::random_functions(rng, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const Element x = f.random(rng);
    CHECK(f.l_inf_norm(x) == doctest::Approx(x.value().cwiseAbs().maxCoeff()).epsilon(1e-10));
  }
}

TEST_CASE("l_inf of a matrix is its spectral norm") {
  std::mt19937_64 rng(6);
  const Algebra m = Algebra::matrices(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Element x = m.random(rng);
    Eigen::JacobiSVD<MatrixXc> svd(x.value());
    CHECK(m.l_inf_norm(x) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));
  }
}
