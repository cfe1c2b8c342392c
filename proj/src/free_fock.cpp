#include "qwn/free_fock.hpp"

#include <algorithm>
#include <cmath>

#include "qwn/combinatorics.hpp"
#include "qwn/linalg.hpp"
#include "qwn/tensor.hpp"

namespace qwn {

namespace {

constexpr const char* kGramLocation = "free quadratic Fock space: scalar product over Boolean partitions";
constexpr const char* kRelationLocation = "free quadratic Fock space: operator equalities";
constexpr const char* kAdjointLocation = "free quadratic Fock space: adjointness of b and b*";
constexpr const char* kNormLocation = "free quadratic Fock space: operator norm estimates";
constexpr const char* kMomentLocation = "free quadratic Fock space: moments over noncrossing partitions";
constexpr const char* kCumulantLocation = "free quadratic Fock space: free cumulants";
constexpr const char* kTraceLocation = "free quadratic Fock space: traciality of the vacuum state";
constexpr const char* kFreenessLocation = "free quadratic Fock space: freeness for disjoint subalgebras";

double scaled(double diff, double scale) { return diff / std::max(1.0, scale); }

double excess(double value, double bound) {
  if (bound <= 0.0) return value;
  return std::max(0.0, value / bound - 1.0);
}

Element product(const Algebra& alg, const std::vector<Element>& xs, const std::vector<int>& idx) {
  Element out = alg.unit();
  for (int i : idx) out = out * xs[static_cast<std::size_t>(i)];
  return out;
}

const Element& pick(const std::vector<Element>& pool, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> u(0, pool.size() - 1);
  return pool[u(rng)];
}

}  // namespace

FreeFock::FreeFock(FreeParams params)
    : FockSpace(params.algebra, params.truncation), params_(std::move(params)) {
  if (!(params_.gamma > 0.0)) throw Error("gamma must be positive");
}

MatrixXc FreeFock::gram(int k) const {
  check_grade(k);
  if (k == 0) return MatrixXc::Ones(1, 1);
  const Algebra& alg = algebra();
  const std::size_t dim = alg.dimension();
  std::vector<IntervalComposition> compositions;
  for_each_interval_composition(k, [&](const IntervalComposition& c) { compositions.push_back(c); });
  std::vector<Element> basis, basis_star;
  for (std::size_t a = 0; a < dim; ++a) {
    basis.push_back(alg.basis(a));
    basis_star.push_back(star(basis.back()));
  }
  const TensorBasis tb(dim, k);
  const auto n = static_cast<Eigen::Index>(tb.size());
  const auto kk = static_cast<std::size_t>(k);
  MatrixXc g = MatrixXc::Zero(n, n);
  // value[a][b] = gamma mu(psi*_b ... psi*_a chi_a ... chi_b) for the interval [a, b].
  std::vector<std::vector<cplx>> value(kk, std::vector<cplx>(kk));
  for (Eigen::Index row = 0; row < n; ++row) {
    const auto bra = tb.multi_index(static_cast<std::size_t>(row));
    for (Eigen::Index col = 0; col < n; ++col) {
      const auto ket = tb.multi_index(static_cast<std::size_t>(col));
      for (std::size_t a = 0; a < kk; ++a) {
        Element left = basis_star[static_cast<std::size_t>(bra[a])];
        Element right = basis[static_cast<std::size_t>(ket[a])];
        value[a][a] = params_.gamma * alg.state(left * right);
        for (std::size_t b = a + 1; b < kk; ++b) {
          left = basis_star[static_cast<std::size_t>(bra[b])] * left;
          right = right * basis[static_cast<std::size_t>(ket[b])];
          value[a][b] = params_.gamma * alg.state(left * right);
        }
      }
      cplx total = 0.0;
      for (const auto& c : compositions) {
        cplx term = 1.0;
        for (std::size_t p = 0; p + 1 < c.cuts.size() && term != 0.0; ++p) {
          term *= value[static_cast<std::size_t>(c.cuts[p])][static_cast<std::size_t>(c.cuts[p + 1] - 1)];
        }
        total += term;
      }
      g(row, col) = total;
    }
  }
  return g;
}

MatrixXc FreeFock::block(OperatorKind kind, const Element& symbol, int source) const {
  const Algebra& alg = algebra();
  alg.check(symbol);
  const std::size_t dim = alg.dimension();
  const int k = source;
  check_grade(k);
  check_grade(k + grade_shift(kind));
  const TensorBasis in(dim, k), out(dim, k + grade_shift(kind));
  MatrixXc m = MatrixXc::Zero(static_cast<Eigen::Index>(out.size()), static_cast<Eigen::Index>(in.size()));
  auto add_first_slot = [&](std::size_t col, const std::vector<int>& rest, const VectorXc& coords, cplx scale) {
    for (std::size_t p = 0; p < dim; ++p) {
      const cplx coef = coords(static_cast<Eigen::Index>(p));
      if (coef == 0.0) continue;
      std::vector<int> target{static_cast<int>(p)};
      target.insert(target.end(), rest.begin(), rest.end());
      m(static_cast<Eigen::Index>(out.index(target)), static_cast<Eigen::Index>(col)) += scale * coef;
    }
  };
  switch (kind) {
    case OperatorKind::creation: {
      const VectorXc c = alg.coordinates(symbol);
      for (std::size_t col = 0; col < in.size(); ++col) add_first_slot(col, in.multi_index(col), c, 1.0);
      break;
    }
    case OperatorKind::annihilation: {
      const Element s = star(symbol);
      std::vector<cplx> first(dim);
      std::vector<std::vector<VectorXc>> merge(dim, std::vector<VectorXc>(dim));
      for (std::size_t a = 0; a < dim; ++a) {
        first[a] = params_.gamma * alg.state(s * alg.basis(a));
        if (k >= 2) {
          for (std::size_t b = 0; b < dim; ++b) merge[a][b] = alg.coordinates(s * alg.basis(a) * alg.basis(b));
        }
      }
      for (std::size_t col = 0; col < in.size(); ++col) {
        const auto multi = in.multi_index(col);
        const auto a = static_cast<std::size_t>(multi[0]);
        const std::vector<int> rest(multi.begin() + 1, multi.end());
        m(static_cast<Eigen::Index>(out.index(rest)), static_cast<Eigen::Index>(col)) += first[a];
        if (k >= 2) {
          const std::vector<int> tail(multi.begin() + 2, multi.end());
          add_first_slot(col, tail, merge[a][static_cast<std::size_t>(multi[1])], 1.0);
        }
      }
      break;
    }
    case OperatorKind::number: {
      if (k == 0) break;
      std::vector<VectorXc> times(dim);
      for (std::size_t a = 0; a < dim; ++a) times[a] = alg.coordinates(symbol * alg.basis(a));
      for (std::size_t col = 0; col < in.size(); ++col) {
        const auto multi = in.multi_index(col);
        const std::vector<int> rest(multi.begin() + 1, multi.end());
        add_first_slot(col, rest, times[static_cast<std::size_t>(multi[0])], 1.0);
      }
      break;
    }
  }
  return m;
}

OperatorSum FreeFock::field(double s, const Element& phi) const {
  return {{1.0, {OperatorKind::creation, phi}},
          {1.0, {OperatorKind::annihilation, star(phi)}},
          {s, {OperatorKind::number, phi}}};
}

cplx free_moment_operator(const FreeFock& fock, double s, const std::vector<Element>& phis) {
  std::vector<OperatorSum> word;
  for (const auto& phi : phis) word.push_back(fock.field(s, phi));
  return fock.vacuum_expectation(word);
}

cplx free_moment_formula(const Algebra& algebra, double gamma, double s,
                         const std::vector<Element>& phis) {
  const int k = static_cast<int>(phis.size());
  cplx total = 0.0;
  for_each_noncrossing_partition(k, [&](const NoncrossingPartition& pi) {
    cplx term = 1.0;
    for (auto block : pi.blocks) {
      const int size = static_cast<int>(block.size());
      const double w = cumulant_weight<double>(size, s);
      if (w == 0.0) {
        term = 0.0;
        break;
      }
      std::sort(block.begin(), block.end());
      term *= gamma * w * algebra.state(product(algebra, phis, block));
    }
    total += term;
  });
  return total;
}

cplx free_cumulant_closed_form(const Algebra& algebra, double gamma, double s,
                               const std::vector<Element>& phis) {
  std::vector<int> all(phis.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return gamma * cumulant_weight<double>(static_cast<int>(phis.size()), s) *
         algebra.state(product(algebra, phis, all));
}

std::vector<CheckRecord> check_free_relations(const FreeFock& fock, const Element& phi,
                                              const Element& psi, const Element& zeta,
                                              const Element& eta, double tol) {
  using K = OperatorKind;
  const int top = fock.truncation();
  const Algebra& alg = fock.algebra();
  const cplx overlap = fock.gamma() * alg.state(star(psi) * phi);
  double r1 = 0.0, r2 = 0.0, r2_adj = 0.0, r3 = 0.0;
  for (int k = 0; k < top; ++k) {
    const auto n = static_cast<Eigen::Index>(fock.grade_size(k));
    const MatrixXc lhs = fock.block(K::annihilation, psi, k + 1) * fock.block(K::creation, phi, k);
    const MatrixXc rhs = overlap * MatrixXc::Identity(n, n) + fock.block(K::number, star(psi) * phi, k);
    r1 = std::max(r1, scaled(max_abs(lhs - rhs), max_abs(rhs)));
    const MatrixXc l2 = fock.block(K::number, zeta, k + 1) * fock.block(K::creation, phi, k);
    const MatrixXc rr2 = fock.block(K::creation, zeta * phi, k);
    r2 = std::max(r2, scaled(max_abs(l2 - rr2), max_abs(rr2)));
  }
  for (int k = 1; k <= top; ++k) {
    const MatrixXc lhs = fock.block(K::annihilation, psi, k) * fock.block(K::number, zeta, k);
    const MatrixXc rhs = fock.block(K::annihilation, star(zeta) * psi, k);
    r2_adj = std::max(r2_adj, scaled(max_abs(lhs - rhs), max_abs(rhs)));
  }
  for (int k = 0; k <= top; ++k) {
    const MatrixXc lhs = fock.block(K::number, zeta, k) * fock.block(K::number, eta, k);
    const MatrixXc rhs = fock.block(K::number, zeta * eta, k);
    r3 = std::max(r3, scaled(max_abs(lhs - rhs), max_abs(rhs)));
  }
  return {
      asserted("free relation b_psi b*_phi = gamma mu(psi* phi) + n_{psi* phi}", kRelationLocation, r1, tol, r1, 0.0),
      asserted("free relation n_zeta b*_phi = b*_{zeta phi}", kRelationLocation, r2, tol, r2, 0.0),
      asserted("free relation b_psi n_zeta = b_{zeta* psi}", kRelationLocation, r2_adj, tol, r2_adj, 0.0),
      asserted("free relation n_zeta n_eta = n_{zeta eta}", kRelationLocation, r3, tol, r3, 0.0),
  };
}

std::vector<CheckRecord> check_free_adjointness(const FreeFock& fock, const std::vector<MatrixXc>& grams,
                                                const Element& zeta, double tol) {
  using K = OperatorKind;
  double shift = 0.0, number = 0.0;
  for (int k = 0; k < fock.truncation(); ++k) {
    const MatrixXc lhs = fock.block(K::annihilation, zeta, k + 1).adjoint() * grams[static_cast<std::size_t>(k)];
    const MatrixXc rhs = grams[static_cast<std::size_t>(k + 1)] * fock.block(K::creation, zeta, k);
    shift = std::max(shift, scaled(max_abs(lhs - rhs), max_abs(rhs)));
  }
  for (int k = 0; k <= fock.truncation(); ++k) {
    const MatrixXc& g = grams[static_cast<std::size_t>(k)];
    const MatrixXc lhs = fock.block(K::number, zeta, k).adjoint() * g;
    const MatrixXc rhs = g * fock.block(K::number, star(zeta), k);
    number = std::max(number, scaled(max_abs(lhs - rhs), max_abs(rhs)));
  }
  return {
      asserted("free adjointness b/b*", kAdjointLocation, shift, tol, shift, 0.0,
               "max over grades of B^H G_k - G_{k+1} B*"),
      asserted("free adjointness n/n*", kAdjointLocation, number, tol, number, 0.0),
  };
}

CheckRecord check_free_positivity(const FreeFock& fock, const std::vector<MatrixXc>& grams, double tol) {
  double lowest = 1.0, hermitian = 0.0;
  Json per_grade = Json::array();
  for (const auto& g : grams) {
    const double low = min_hermitian_eigenvalue(g);
    per_grade.push_back(low);
    lowest = std::min(lowest, low);
    hermitian = std::max(hermitian, hermiticity_defect(g));
  }
  const std::string kind = fock.algebra().is_commutative() ? "functions" : "matrices";
  return asserted("free Gram positive semidefinite (" + kind + ")", kGramLocation,
                  std::max(0.0, -lowest), tol,
                  Json{{"min_eigenvalue", lowest}, {"per_grade", per_grade}, {"hermiticity_defect", hermitian}},
                  Json{{"min_eigenvalue_at_least", -tol}});
}

std::vector<CheckRecord> check_free_norms(const FreeFock& fock, const std::vector<MatrixXc>& grams,
                                          const Element& phi, double tol) {
  using K = OperatorKind;
  const Algebra& alg = fock.algebra();
  const double shift_bound = std::sqrt(fock.gamma()) * alg.l2_norm(phi) + alg.l_inf_norm(phi);
  const double number_bound = alg.l_inf_norm(phi);
  double b = 0.0, bs = 0.0, n = 0.0;
  for (int k = 1; k <= fock.truncation(); ++k) {
    const auto& gk = grams[static_cast<std::size_t>(k)];
    const auto& gm = grams[static_cast<std::size_t>(k - 1)];
    b = std::max(b, gram_operator_norm(fock.block(K::annihilation, phi, k), gk, gm).norm);
    bs = std::max(bs, gram_operator_norm(fock.block(K::creation, phi, k - 1), gm, gk).norm);
    n = std::max(n, gram_operator_norm(fock.block(K::number, phi, k), gk, gk).norm);
  }
  return {
      asserted("free norm bound b", kNormLocation, excess(b, shift_bound), tol, b, shift_bound, "max over grades"),
      asserted("free norm bound b*", kNormLocation, excess(bs, shift_bound), tol, bs, shift_bound, "max over grades"),
      asserted("free norm bound n", kNormLocation, excess(n, number_bound), tol, n, number_bound, "max over grades"),
  };
}

std::vector<CheckRecord> check_free_moments(const FreeFock& fock, double s, int max_length,
                                            int trials, std::mt19937_64& rng, double tol) {
  const Algebra& alg = fock.algebra();
  std::vector<Element> pool;
  for (int i = 0; i < 3; ++i) pool.push_back(alg.random(rng));
  double moment_err = 0.0, cumulant_err = 0.0, univariate_err = 0.0;
  for (int t = 0; t < trials; ++t) {
    for (int len = 1; len <= max_length; ++len) {
      std::vector<Element> word;
      for (int i = 0; i < len; ++i) word.push_back(pick(pool, rng));
      const cplx op = free_moment_operator(fock, s, word);
      const cplx formula = free_moment_formula(alg, fock.gamma(), s, word);
      moment_err = std::max(moment_err, scaled(std::abs(op - formula), std::abs(formula)));
      const cplx extracted = free_cumulant_from_moments(len, [&](const std::vector<int>& positions) {
        std::vector<Element> sub;
        for (int p : positions) sub.push_back(word[static_cast<std::size_t>(p)]);
        return free_moment_operator(fock, s, sub);
      });
      const cplx closed = free_cumulant_closed_form(alg, fock.gamma(), s, word);
      cumulant_err = std::max(cumulant_err, scaled(std::abs(extracted - closed), std::abs(closed)));
    }
  }
  // Univariate transform on the moments of a single field.
  const Element phi = pool.front();
  std::vector<cplx> moments;
  for (int len = 1; len <= max_length; ++len) {
    moments.push_back(free_moment_operator(fock, s, std::vector<Element>(static_cast<std::size_t>(len), phi)));
  }
  const auto cumulants = moments_to_free_cumulants<cplx>(moments);
  for (int len = 1; len <= max_length; ++len) {
    const cplx closed = free_cumulant_closed_form(alg, fock.gamma(), s,
                                                  std::vector<Element>(static_cast<std::size_t>(len), phi));
    univariate_err = std::max(univariate_err,
                              scaled(std::abs(cumulants[static_cast<std::size_t>(len - 1)] - closed), std::abs(closed)));
  }
  const std::string kind = alg.is_commutative() ? "functions" : "matrices";
  return {
      asserted("free moments operator vs noncrossing formula (" + kind + ")", kMomentLocation, moment_err, tol,
               moment_err, 0.0, "relative error, word lengths 1.." + std::to_string(max_length)),
      asserted("free cumulants mixed extraction vs closed form (" + kind + ")", kCumulantLocation, cumulant_err,
               tol, cumulant_err, 0.0),
      asserted("free cumulants univariate transform vs closed form (" + kind + ")", kCumulantLocation,
               univariate_err, tol, univariate_err, 0.0),
  };
}

CheckRecord check_traciality(const FreeFock& fock, double s, int factors, int trials,
                             std::mt19937_64& rng, double tol) {
  if (2 * factors > 2 * fock.truncation()) throw Error("traciality words exceed the truncation");
  const Algebra& alg = fock.algebra();
  std::vector<Element> pool;
  for (int i = 0; i < 3; ++i) pool.push_back(alg.random(rng));
  std::uniform_int_distribution<int> len(1, factors);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<OperatorSum> x, y;
    for (int i = len(rng); i > 0; --i) x.push_back(fock.field(s, pick(pool, rng)));
    for (int i = len(rng); i > 0; --i) y.push_back(fock.field(s, pick(pool, rng)));
    std::vector<OperatorSum> xy = x, yx = y;
    xy.insert(xy.end(), y.begin(), y.end());
    yx.insert(yx.end(), x.begin(), x.end());
    worst = std::max(worst, std::abs(fock.vacuum_expectation(xy) - fock.vacuum_expectation(yx)));
  }
  const std::string kind = alg.is_commutative() ? "functions" : "matrices";
  return asserted("free vacuum state tracial (" + kind + ")", kTraceLocation, worst, tol, worst, 0.0,
                  "max |rho(XY) - rho(YX)|, up to " + std::to_string(factors) + " factors each");
}

CheckRecord check_freeness(const FreeFock& fock, double s, int order, int trials, std::mt19937_64& rng,
                           double tol) {
  const Algebra& alg = fock.algebra();
  if (alg.kind() != AlgebraKind::functions || alg.dimension() < 2) {
    throw Error("freeness check needs a function algebra on at least two points");
  }
  if (order < 2 || order > 2 * fock.truncation()) throw Error("freeness order outside 2..2N");
  const std::size_t d = alg.dimension();
  const std::size_t groups = std::min<std::size_t>(d, 3);
  auto supported = [&](std::size_t group) {
    VectorXc values = alg.random(rng).value().col(0);
    for (std::size_t p = 0; p < d; ++p) {
      if (p % groups != group) values(static_cast<Eigen::Index>(p)) = 0.0;
    }
    return alg.from_values(values);
  };
  // A polynomial as monomials (coef, word); the empty word is the identity.
  using Poly = std::vector<std::pair<cplx, std::vector<OperatorSum>>>;
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<std::size_t> group_pick(0, groups - 1);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int factors = std::uniform_int_distribution<int>(2, order)(rng);
    std::vector<int> degree(static_cast<std::size_t>(factors), 1);
    for (int budget = order - factors; budget > 0; --budget) {
      auto& dg = degree[std::uniform_int_distribution<std::size_t>(0, degree.size() - 1)(rng)];
      if (dg == 1 && gauss(rng) > 0.0) dg = 2;
    }
    std::size_t group = group_pick(rng);
    Poly total{{1.0, {}}};
    for (int f = 0; f < factors; ++f) {
      if (f > 0) {
        std::size_t next = group;
        while (next == group) next = group_pick(rng);
        group = next;
      }
      const OperatorSum q1 = fock.field(s, supported(group));
      Poly x{{cplx(gauss(rng), gauss(rng)), {q1}}};
      if (degree[static_cast<std::size_t>(f)] == 2) {
        x.push_back({cplx(gauss(rng), gauss(rng)), {q1, fock.field(s, supported(group))}});
      }
      cplx mean = 0.0;
      for (const auto& [c, w] : x) mean += c * fock.vacuum_expectation(w);
      x.push_back({-mean, {}});
      Poly expanded;
      for (const auto& [c1, w1] : total) {
        for (const auto& [c2, w2] : x) {
          auto w = w1;
          w.insert(w.end(), w2.begin(), w2.end());
          expanded.push_back({c1 * c2, std::move(w)});
        }
      }
      total = std::move(expanded);
    }
    cplx rho = 0.0;
    for (const auto& [c, w] : total) rho += c * (w.empty() ? cplx(1.0) : fock.vacuum_expectation(w));
    worst = std::max(worst, std::abs(rho));
  }
  return asserted("free alternating centered products vanish", kFreenessLocation, worst, tol, worst, 0.0,
                  std::to_string(groups) + " disjoint supports, total degree <= " + std::to_string(order));
}

}  // namespace qwn
