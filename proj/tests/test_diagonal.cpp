#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qwn/bosonic_fock.hpp"
#include "qwn/diagonal_rep.hpp"
#include "qwn/linalg.hpp"
#include "qwn/tensor.hpp"

using namespace qwn;
using K = OperatorKind;

namespace {

VectorXc random_symmetric(std::mt19937_64& rng, std::size_t d, int k) {
  const MatrixXc u = symmetric_basis(d, k);
  return u * random_vector(rng, u.cols());
}

}  // namespace

TEST_CASE("measure masses") {
  const DiagonalRepresentation one(1.0, PointMeasureSpace({1.0}));
  CHECK(one.build_measure(0).total_mass() == doctest::Approx(1.0));
  CHECK(one.build_measure(2).total_mass() == doctest::Approx(4.0));
  const VectorXc chi2 = VectorXc::Ones(1);
  CHECK(std::abs(DiagonalRepresentation::inner_product(one.build_measure(2), chi2, chi2) - 4.0) < 1e-14);
  CHECK(DiagonalRepresentation::inner_product(one.build_measure(2), chi2, VectorXc::Zero(1)) == cplx(0.0));

  const PointMeasureSpace m({0.3, 0.9});
  const double g0 = 0.7;
  const DiagonalMeasure mu1 = DiagonalRepresentation(g0, m).build_measure(1);
  CHECK(mu1.weights(0) == doctest::Approx(2 * g0 * 0.3));
  CHECK(mu1.weights(1) == doctest::Approx(2 * g0 * 0.9));
}

TEST_CASE("measures are nonnegative") {
  std::mt19937_64 rng(1);
  const DiagonalRepresentation rep(0.4, test::random_functions(rng, 3).space());
  for (int k = 0; k <= 4; ++k) CHECK(rep.build_measure(k).weights.minCoeff() >= 0.0);
}

TEST_CASE("inner products agree with the tensor Gram on symmetric vectors") {
  std::mt19937_64 rng(2);
  for (int d = 1; d <= 2; ++d) {
    const Algebra alg = test::random_functions(rng, d);
    const double g0 = 0.5 + d;
    const DiagonalRepresentation rep(g0, alg.space());
    const BosonicFock fock({g0, 3, alg});
    for (int k = 0; k <= 3; ++k) {
      const DiagonalMeasure mu = rep.build_measure(k);
      const MatrixXc g = fock.gram(k);
      for (int t = 0; t < 20; ++t) {
        const VectorXc u = random_symmetric(rng, alg.dimension(), k), v = random_symmetric(rng, alg.dimension(), k);
        CHECK(std::abs(DiagonalRepresentation::inner_product(mu, u, v) - u.dot(g * v)) < 1e-10 * std::max(1.0, u.norm() * v.norm()));
      }
    }
  }
}

TEST_CASE("pointwise operator formulas") {
  const PointMeasureSpace m({0.5, 1.5});
  const DiagonalRepresentation rep(1.0, m);
  const VectorXc f{{2.0, -1.0}};
  // b* on the constant 1 of grade 0 gives phi(x_1).
  CHECK((rep.apply(K::creation, f, VectorXc::Ones(1), 0) - f).norm() < 1e-15);
  // n multiplies by sum_i phi(x_i).
  const VectorXc psi{{1.0, 2.0, 3.0, 4.0}};
  const VectorXc n = rep.apply(K::number, f, psi, 2);
  CHECK(n(0) == cplx(4.0));
  CHECK(n(1) == cplx(2.0));
  CHECK(n(2) == cplx(3.0 * 1.0));
  CHECK(n(3) == cplx(-8.0));
  CHECK_THROWS_AS(rep.apply(K::annihilation, f, VectorXc::Ones(1), 0), Error);
  CHECK_THROWS_AS(rep.apply(K::number, VectorXc::Ones(3), psi, 2), Error);
}

TEST_CASE("operator actions agree with the tensor implementation") {
  std::mt19937_64 rng(3);
  for (int d = 1; d <= 2; ++d) {
    const Algebra alg = test::random_functions(rng, d);
    const double g0 = 0.8;
    const DiagonalRepresentation rep(g0, alg.space());
    const BosonicFock fock({g0, 3, alg});
    for (int t = 0; t < 20; ++t) {
      const Element phi = alg.random(rng);
      const VectorXc f = alg.coordinates(phi);
      for (int k = 0; k <= 3; ++k) {
        const VectorXc psi = random_symmetric(rng, alg.dimension(), k);
        const double scale = std::max(1.0, psi.norm() * f.norm());
        CHECK((rep.apply(K::number, f, psi, k) - fock.block(K::number, phi, k) * psi).norm() < 1e-10 * scale);
        if (k < 3) CHECK((rep.apply(K::creation, f, psi, k) - fock.block(K::creation, phi, k) * psi).norm() < 1e-10 * scale);
        if (k > 0) {
          CHECK((rep.apply(K::annihilation, f, psi, k) - fock.block(K::annihilation, phi, k) * psi).norm() < 1e-10 * scale);
        }
      }
    }
    for (const auto& r : check_diagonal_against_tensor(rep, 3, 20, rng)) CHECK(r.status == Status::pass);
  }
}
