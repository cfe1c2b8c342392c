#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qwn/bosonic_fock.hpp"
#include "qwn/rewrite.hpp"

using namespace qwn;
using L = LetterKind;

namespace {

struct Setup {
  Algebra alg;
  SymbolTable symbols;
  Monomial phi, psi, chi;
};

Setup make_setup(std::mt19937_64& rng, double t = 0.6) {
  const Algebra alg = Algebra::functions(PointMeasureSpace({t, 1.0}));
  SymbolTable table(alg);
  const Monomial phi = table.add("phi", alg.random(rng));
  const Monomial psi = table.add("psi", alg.random(rng));
  const Monomial chi = table.add("chi", alg.from_values(VectorXc{{1.0, 0.0}}));
  return {alg, table, phi, psi, chi};
}

Word word(std::initializer_list<Letter> letters) { return Word(letters); }

// Raw moments of the gamma law by the recursion m_j = theta (alpha + j - 1) m_{j-1}.
double gamma_moment(double alpha, double theta, int m) {
  double v = 1.0;
  for (int j = 1; j <= m; ++j) v *= theta * (alpha + j - 1);
  return v;
}

}  // namespace

TEST_CASE("monomials") {
  CHECK(multiply({0, 2}, {1}) == Monomial{0, 1, 2});
  CHECK(conjugate({0, 3}) == Monomial{1, 2});
  CHECK(conjugate(conjugate({0, 1, 4})) == Monomial{0, 1, 4});
  std::mt19937_64 rng(1);
  Setup s = make_setup(rng);
  CHECK(s.symbols.get("1").empty());
  CHECK_THROWS_AS(s.symbols.get("nope"), Error);
  CHECK_THROWS_AS(SymbolTable(Algebra::matrices(2)), Error);
  const Monomial pp = multiply(conjugate(s.phi), s.psi);
  CHECK(std::abs(s.symbols.state(pp) - s.alg.inner(s.symbols.evaluate(s.phi), s.symbols.evaluate(s.psi))) < 1e-14);
}

TEST_CASE("letter kinds") {
  for (L k : {L::b_star, L::a_star, L::n, L::b, L::a}) CHECK(letter_kind_from_string(to_string(k)) == k);
  CHECK(rank(L::b_star) == 0);
  CHECK(rank(L::a_star) == 0);
  CHECK(rank(L::n) == 1);
  CHECK(rank(L::a) == 2);
  CHECK_THROWS_AS(letter_kind_from_string("c"), Error);
}

TEST_CASE("the quadratic commutation rule") {
  std::mt19937_64 rng(2);
  Setup s = make_setup(rng);
  const double g0 = 0.7;
  const Rewriter rw(s.symbols, RelationTable{g0});
  const Expression e = Expression::letter(L::b, s.phi) * Expression::letter(L::b_star, s.psi);
  const RewriteResult r = rw.normal_order(e);
  Expression want = Expression::letter(L::b_star, s.psi) * Expression::letter(L::b, s.phi);
  want += Expression::scalar(2.0 * g0 * s.symbols.inner(s.phi, s.psi));
  want += 4.0 * Expression::letter(L::n, multiply(conjugate(s.phi), s.psi));
  CHECK(max_difference(r.form, want) < 1e-14);
  CHECK(r.steps >= 1);
  CHECK(static_cast<double>(r.steps) <= r.step_bound);
}

TEST_CASE("normal words are fixed and number operators commute") {
  std::mt19937_64 rng(3);
  Setup s = make_setup(rng);
  const Rewriter rw(s.symbols, RelationTable{});
  const Expression normal = Expression::letter(L::b_star, s.phi) * Expression::letter(L::n, s.psi) *
                            Expression::letter(L::b, s.chi);
  const RewriteResult r = rw.normal_order(normal);
  CHECK(max_difference(r.form, normal) == 0.0);
  CHECK(r.steps == 0);
  const Expression nn = Expression::letter(L::n, s.phi) * Expression::letter(L::n, s.psi) -
                        Expression::letter(L::n, s.psi) * Expression::letter(L::n, s.phi);
  CHECK(rw.normal_order(nn).form.max_coefficient() == 0.0);
  CHECK(is_normal(word({{L::b_star, s.phi}, {L::a_star, s.phi}, {L::n, s.psi}, {L::a, s.psi}})));
  CHECK_FALSE(is_normal(word({{L::b, s.phi}, {L::b_star, s.psi}})));
}

TEST_CASE("unsupported number-linear pairs throw") {
  std::mt19937_64 rng(4);
  Setup s = make_setup(rng);
  const Rewriter rw(s.symbols, RelationTable{});
  CHECK_THROWS_AS(rw.normal_order(Expression::letter(L::n, s.phi) * Expression::letter(L::a_star, s.psi)), Error);
  CHECK_THROWS_AS(rw.normal_order(Expression::letter(L::a, s.phi) * Expression::letter(L::n, s.psi)), Error);
}

TEST_CASE("linear and mixed rules") {
  std::mt19937_64 rng(5);
  Setup s = make_setup(rng);
  const Rewriter rw(s.symbols, RelationTable{});
  const RewriteResult aa = rw.normal_order(Expression::letter(L::a, s.phi) * Expression::letter(L::a_star, s.psi));
  CHECK(test::rel(aa.form.scalar_part(), s.symbols.inner(s.phi, s.psi)) < 1e-14);
  const RewriteResult ab = rw.normal_order(Expression::letter(L::a, s.phi) * Expression::letter(L::b_star, s.psi));
  Expression want = Expression::letter(L::b_star, s.psi) * Expression::letter(L::a, s.phi);
  want += 2.0 * Expression::letter(L::a_star, multiply(conjugate(s.phi), s.psi));
  CHECK(max_difference(ab.form, want) < 1e-14);
}

TEST_CASE("vacuum moments") {
  std::mt19937_64 rng(6);
  const double t = 0.6;
  Setup s = make_setup(rng, t);
  for (double g0 : {0.5, 1.0, 2.0}) {
    const Rewriter rw(s.symbols, RelationTable{g0});
    const Expression q = Expression::field(2.0, s.chi);
    CHECK(test::rel(rw.vacuum_moment(q.power(2)), 2.0 * g0 * t) < 1e-12);
    CHECK(test::rel(rw.vacuum_moment(q.power(3)), 8.0 * g0 * t) < 1e-12);
    CHECK(rw.vacuum_moment(Expression::letter(L::b_star, s.phi)) == cplx(0.0));
    // The measured Fock table gives 4 gamma0 t, as do the Fock matrices.
    const Rewriter fock_rw(s.symbols, RelationTable::fock(g0, 1.0));
    CHECK(test::rel(fock_rw.vacuum_moment(q.power(3)), 4.0 * g0 * t) < 1e-12);
    const BosonicFock fock({g0, 2, s.alg});
    const Element chi = s.symbols.evaluate(s.chi);
    const OperatorSum field{{1.0, {OperatorKind::creation, chi}},
                            {1.0, {OperatorKind::annihilation, star(chi)}},
                            {2.0, {OperatorKind::number, chi}}};
    CHECK(test::rel(fock.vacuum_expectation(std::vector<OperatorSum>{field, field, field}), 4.0 * g0 * t) < 1e-12);
  }
}

TEST_CASE("vacuum pruning is exact") {
  std::mt19937_64 rng(7);
  Setup s = make_setup(rng);
  const Rewriter rw(s.symbols, RelationTable{1.3});
  const std::vector<Monomial> pool{s.phi, s.psi, s.chi};
  for (int t = 0; t < 30; ++t) {
    Expression e = Expression::scalar(1.0);
    for (int i = 0; i < 6; ++i) e = e * Expression::field(0.7, pool[static_cast<std::size_t>(i % 3)]);
    RewriteOptions pruned;
    pruned.vacuum_only = true;
    CHECK(test::rel(rw.normal_order(e, pruned).form.scalar_part(), rw.normal_order(e).form.scalar_part()) < 1e-12);
  }
}

TEST_CASE("commuting family and factorization") {
  std::mt19937_64 rng(8);
  const Algebra alg = Algebra::functions(PointMeasureSpace({0.4, 0.8, 1.1, 0.6}));
  SymbolTable table(alg);
  const Monomial phi = table.add("phi", alg.random(rng));
  const Monomial psi = table.add("psi", alg.random(rng));
  const Monomial d1 = table.add("d1", alg.from_values(VectorXc{{1.5, 0.0, -0.5, 0.0}}));
  const Monomial d2 = table.add("d2", alg.from_values(VectorXc{{0.0, 2.0, 0.0, 0.3}}));
  const Rewriter rw(table, RelationTable{0.9});
  for (double s : {0.0, 2.0, -1.2}) {
    for (const auto& r : check_commuting_family(rw, s, phi, phi)) CHECK(r.status == Status::pass);
    for (const auto& r : check_commuting_family(rw, s, phi, psi)) CHECK(r.status == Status::pass);
    for (const auto& r : check_commuting_family(rw, s, d1, d2)) CHECK(r.status == Status::pass);
    const Expression q1 = Expression::field(s, d1), q2 = Expression::field(s, d2);
    const Expression comm = q1 * q2 - q2 * q1;
    CHECK(rw.normal_order(comm).form.max_coefficient() < 1e-12);
    for (int p = 0; p <= 3; ++p) {
      for (int q = 0; q <= 3; ++q) CHECK(check_factorization(rw, s, d1, d2, p, q).status == Status::pass);
    }
    const cplx joint = rw.vacuum_moment(q1.power(2) * q2.power(2));
    CHECK(test::rel(joint, rw.vacuum_moment(q1.power(2)) * rw.vacuum_moment(q2.power(2))) < 1e-10);
    CHECK(std::abs(rw.vacuum_moment(q1 * q2.power(3))) < 1e-12);
  }
  CHECK_THROWS_AS(check_factorization(rw, 2.0, phi, psi, 1, 1), Error);
}

TEST_CASE("gamma moments") {
  for (auto [g0, t] : {std::pair{1.0, 1.0}, {2.0, 1.5}, {1.0, 3.0}, {0.5, 2.0}}) {
    for (const auto& r : gamma_moment_check(g0, t, 6, RelationTable{})) CHECK(r.passed());
    for (int m = 0; m <= 6; ++m) {
      CHECK(gamma_raw_moment(g0 * t / 2, 2 / g0, m) == doctest::Approx(gamma_moment(g0 * t / 2, 2 / g0, m)));
    }
  }
  // Anchors: E[(Q_2(chi) + 1)^m] = 1, 3, 15 at gamma0 = t = 1.
  const Algebra alg = Algebra::functions(PointMeasureSpace({1.0, 1.0}));
  SymbolTable table(alg);
  const Monomial chi = table.add("chi", alg.from_values(VectorXc{{1.0, 0.0}}));
  const Rewriter rw(table, RelationTable{1.0});
  const Expression x = Expression::field(2.0, chi) + Expression::scalar(1.0);
  CHECK(rw.vacuum_moment(x) == cplx(1.0));
  CHECK(rw.vacuum_moment(x.power(2)) == cplx(3.0));
  CHECK(rw.vacuum_moment(x.power(3)) == cplx(15.0));
  // With kappa = 1 the third moment is 11.
  const Rewriter fock_rw(table, RelationTable::fock(1.0, 1.0));
  CHECK(fock_rw.vacuum_moment(x.power(3)) == cplx(11.0));
}

TEST_CASE("no-go certificate") {
  const NogoCertificate a = nogo_certificate(1.0, 0.5, -2.0);
  CHECK(a.closed_form == doctest::Approx(-1.0));
  CHECK(std::abs(a.symbolic - a.closed_form) < 1e-12);
  CHECK(a.minimizer == doctest::Approx(-2.0));
  CHECK(nogo_certificate(1.0, 1.0, 0.0).min_value == doctest::Approx(0.0));
  for (double g0 : {0.3, 1.0, 2.5}) {
    for (double l : {0.1, 0.7, 3.0}) {
      const NogoCertificate c = nogo_certificate(g0, l, 0.0);
      CHECK(c.closed_form == doctest::Approx(2 * g0 * l));
      CHECK(std::abs(c.symbolic - c.closed_form) < 1e-12);
      const double cmin = -1.0 / l;
      const double value = 2 * cmin * cmin * l * l + 4 * cmin * l + 2 * g0 * l;
      CHECK(c.min_value == doctest::Approx(value));
      CHECK((c.min_value < 0) == (l < 1 / g0));
      for (const auto& r : check_nogo(g0, l)) CHECK(r.passed());
    }
  }
}

TEST_CASE("termination and strategy independence") {
  std::mt19937_64 rng(9);
  Setup s = make_setup(rng);
  const Rewriter rw(s.symbols, RelationTable{0.8});
  for (const auto& r : check_rewriting(rw, {s.phi, s.psi, s.chi}, 300, 10, 20, rng)) CHECK(r.status == Status::pass);
  const Expression e = Expression::letter(L::b, s.phi) * Expression::letter(L::n, s.psi) *
                       Expression::letter(L::b_star, s.chi) * Expression::letter(L::b_star, s.phi);
  const RewriteResult base = rw.normal_order(e);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RewriteOptions o;
    o.strategy = Strategy::random;
    o.seed = seed;
    CHECK(max_difference(rw.normal_order(e, o).form, base.form) < 1e-12);
  }
  for (const auto& [w, c] : base.form.terms()) CHECK(is_normal(w));
}

TEST_CASE("engine against the Fock matrices") {
  std::mt19937_64 rng(10);
  const Algebra alg = test::random_functions(rng, 2);
  for (const auto& r : check_engine_against_fock(alg, 0.7, 3, 100, 6, rng)) CHECK(r.passed());
}

TEST_CASE("expression algebra") {
  std::mt19937_64 rng(11);
  Setup s = make_setup(rng);
  const Expression q = Expression::field(1.5, s.phi);
  CHECK(max_difference(q.adjoint().adjoint(), q) == 0.0);
  CHECK(max_difference((q * q).adjoint(), q.adjoint() * q.adjoint()) == 0.0);
  CHECK((q - q).max_coefficient() == 0.0);
  CHECK(q.power(0).scalar_part() == cplx(1.0));
  CHECK(q.power(3).max_length() == 3);
  const Json j = to_json(Expression::letter(L::b_star, s.phi), s.symbols);
  CHECK(j.dump().find("phi") != std::string::npos);
}
