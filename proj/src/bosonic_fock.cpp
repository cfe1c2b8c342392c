#include "qwn/bosonic_fock.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qwn/combinatorics.hpp"
#include "qwn/linalg.hpp"
#include "qwn/tensor.hpp"

namespace qwn {

namespace {

constexpr const char* kAdjointLocation = "bosonic quadratic Fock space: adjointness theorem";
constexpr const char* kCommutationLocation = "bosonic quadratic Fock space: commutation theorem";
constexpr const char* kNormLocation = "bosonic quadratic Fock space: operator norm estimates";
constexpr const char* kGramLocation = "bosonic quadratic Fock space: sesquilinear form over ordered partitions";
constexpr const char* kSymmetryLocation = "bosonic quadratic Fock space: range of the operators on symmetric powers";
constexpr const char* kPositivityLocation =
    "bosonic quadratic Fock space: scalar product, positivity question for noncommutative algebras";

double scaled(double diff, double scale) { return diff / std::max(1.0, scale); }

cplx frobenius(const MatrixXc& a, const MatrixXc& b) { return a.conjugate().cwiseProduct(b).sum(); }

void require_commutative(const BosonicFock& fock, const char* what) {
  if (!fock.algebra().is_commutative()) {
    throw Error(std::string(what) + " requires a commutative algebra");
  }
}

// Coordinates of x, with exact zeros skipped by callers.
struct Coords {
  explicit Coords(const Algebra& a, const Element& x) : c(a.coordinates(x)) {}
  VectorXc c;
};

}  // namespace

MatrixXc GramStack::projector(int k) const {
  const auto& u = symmetric.at(static_cast<std::size_t>(k));
  return u * u.adjoint();
}

BosonicFock::BosonicFock(BosonicParams params)
    : FockSpace(params.algebra, params.truncation), params_(std::move(params)) {
  if (!(params_.gamma0 > 0.0)) throw Error("gamma0 must be positive");
  if (params_.truncation > kMaxOrderedPartitionSize) throw Error("truncation exceeds partition cap");
}

GramMethod BosonicFock::default_method() const {
  return algebra().is_commutative() ? GramMethod::set_partitions : GramMethod::ordered_partitions;
}

MatrixXc BosonicFock::gram(int k, GramMethod method) const {
  check_grade(k);
  const auto n = static_cast<Eigen::Index>(grade_size(k));
  if (k == 0) return MatrixXc::Ones(1, 1);
  if (method == GramMethod::set_partitions && !algebra().is_commutative()) {
    throw Error("set-partition Gram path requires a commutative algebra");
  }
  const Algebra& alg = algebra();
  const std::size_t dim = alg.dimension();
  // slot[a][b] = e_a^* e_b.
  std::vector<std::vector<Element>> slot(dim);
  std::vector<std::vector<bool>> slot_zero(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      slot[a].push_back(star(alg.basis(a)) * alg.basis(b));
      slot_zero[a].push_back(slot[a].back().value().cwiseAbs().maxCoeff() == 0.0);
    }
  }
  // Each family as (weight, blocks); the weight already folds in gamma0 / n_p
  // (ordered) or gamma0 (n_p - 1)! (set partitions).
  std::vector<std::pair<double, std::vector<std::vector<int>>>> families;
  if (method == GramMethod::ordered_partitions) {
    for_each_ordered_partition(k, [&](const OrderedPartition& p) {
      double w = 1.0;
      for (const auto& block : p.blocks) w *= params_.gamma0 / static_cast<double>(block.size());
      families.emplace_back(w, p.blocks);
    });
  } else {
    for_each_set_partition(k, [&](const SetPartition& p) {
      double w = 1.0;
      for (const auto& block : p.blocks) {
        w *= params_.gamma0 * factorial(static_cast<unsigned>(block.size() - 1)).convert_to<double>();
      }
      families.emplace_back(w, p.blocks);
    });
  }
  const double prefactor = std::pow(2.0, k) / factorial(static_cast<unsigned>(k)).convert_to<double>();
  const TensorBasis basis(dim, k);
  MatrixXc g = MatrixXc::Zero(n, n);
  std::vector<Element> x(static_cast<std::size_t>(k));
  for (Eigen::Index row = 0; row < n; ++row) {
    const auto bra = basis.multi_index(static_cast<std::size_t>(row));
    for (Eigen::Index col = 0; col < n; ++col) {
      const auto ket = basis.multi_index(static_cast<std::size_t>(col));
      bool vanishes = false;
      for (int r = 0; r < k && !vanishes; ++r) {
        const auto a = static_cast<std::size_t>(bra[static_cast<std::size_t>(r)]);
        const auto b = static_cast<std::size_t>(ket[static_cast<std::size_t>(r)]);
        vanishes = slot_zero[a][b];
        x[static_cast<std::size_t>(r)] = slot[a][b];
      }
      if (vanishes) continue;
      cplx total = 0.0;
      for (const auto& [weight, blocks] : families) {
        cplx term = weight;
        for (const auto& block : blocks) {
          Element product = x[static_cast<std::size_t>(block.front())];
          for (std::size_t j = 1; j < block.size(); ++j) {
            product = product * x[static_cast<std::size_t>(block[j])];
          }
          term *= alg.state(product);
          if (term == 0.0) break;
        }
        total += term;
      }
      g(row, col) = prefactor * total;
    }
  }
  return g;
}

GramStack BosonicFock::gram_stack() const {
  GramStack s;
  for (int k = 0; k <= truncation(); ++k) {
    s.gram.push_back(gram(k));
    s.symmetric.push_back(symmetric_basis(algebra().dimension(), k));
    s.compressed.push_back(compress(s.gram.back(), s.symmetric.back()));
  }
  return s;
}

MatrixXc BosonicFock::block(OperatorKind kind, const Element& symbol, int source) const {
  algebra().check(symbol);
  switch (kind) {
    case OperatorKind::creation: return creation_block(symbol, source);
    case OperatorKind::annihilation: return annihilation_block(symbol, source);
    case OperatorKind::number: return number_block(symbol, source);
  }
  return {};
}

// b*_psi inserts psi into each of the k+1 slots.
MatrixXc BosonicFock::creation_block(const Element& psi, int k) const {
  check_grade(k);
  check_grade(k + 1);
  const std::size_t dim = algebra().dimension();
  const TensorBasis in(dim, k), out(dim, k + 1);
  const Coords c(algebra(), psi);
  MatrixXc m = MatrixXc::Zero(static_cast<Eigen::Index>(out.size()), static_cast<Eigen::Index>(in.size()));
  for (std::size_t col = 0; col < in.size(); ++col) {
    const auto multi = in.multi_index(col);
    for (int slot = 0; slot <= k; ++slot) {
      for (std::size_t p = 0; p < dim; ++p) {
        const cplx coef = c.c(static_cast<Eigen::Index>(p));
        if (coef == 0.0) continue;
        auto target = multi;
        target.insert(target.begin() + slot, static_cast<int>(p));
        m(static_cast<Eigen::Index>(out.index(target)), static_cast<Eigen::Index>(col)) += coef;
      }
    }
  }
  return m;
}

// b_psi(x_1 ... x_k) = 2 gamma0 mu(psi^* x_1) x_2 ... x_k
//                     + 2 sum_{i>=2} x_2 ... (x_i psi^* x_1) ... x_k.
MatrixXc BosonicFock::annihilation_block(const Element& psi, int k) const {
  check_grade(k);
  check_grade(k - 1);
  const Algebra& alg = algebra();
  const std::size_t dim = alg.dimension();
  const TensorBasis in(dim, k), out(dim, k - 1);
  const Element psi_star = star(psi);
  std::vector<cplx> first(dim);
  std::vector<std::vector<VectorXc>> merge(dim, std::vector<VectorXc>(dim));
  for (std::size_t a = 0; a < dim; ++a) {
    first[a] = alg.state(psi_star * alg.basis(a));
    for (std::size_t c = 0; c < dim; ++c) {
      merge[a][c] = alg.coordinates(alg.basis(c) * psi_star * alg.basis(a));
    }
  }
  MatrixXc m = MatrixXc::Zero(static_cast<Eigen::Index>(out.size()), static_cast<Eigen::Index>(in.size()));
  for (std::size_t col = 0; col < in.size(); ++col) {
    const auto multi = in.multi_index(col);
    const auto a = static_cast<std::size_t>(multi[0]);
    std::vector<int> rest(multi.begin() + 1, multi.end());
    m(static_cast<Eigen::Index>(out.index(rest)), static_cast<Eigen::Index>(col)) +=
        2.0 * params_.gamma0 * first[a];
    for (int i = 1; i < k; ++i) {
      const auto c = static_cast<std::size_t>(multi[static_cast<std::size_t>(i)]);
      const VectorXc& merged = merge[a][c];
      for (std::size_t p = 0; p < dim; ++p) {
        const cplx coef = merged(static_cast<Eigen::Index>(p));
        if (coef == 0.0) continue;
        auto target = rest;
        target[static_cast<std::size_t>(i - 1)] = static_cast<int>(p);
        m(static_cast<Eigen::Index>(out.index(target)), static_cast<Eigen::Index>(col)) += 2.0 * coef;
      }
    }
  }
  return m;
}

// n_psi multiplies each slot by psi and sums.
MatrixXc BosonicFock::number_block(const Element& psi, int k) const {
  check_grade(k);
  const Algebra& alg = algebra();
  const std::size_t dim = alg.dimension();
  const TensorBasis in(dim, k);
  std::vector<VectorXc> times(dim);
  for (std::size_t a = 0; a < dim; ++a) times[a] = alg.coordinates(psi * alg.basis(a));
  const auto n = static_cast<Eigen::Index>(in.size());
  MatrixXc m = MatrixXc::Zero(n, n);
  for (std::size_t col = 0; col < in.size(); ++col) {
    const auto multi = in.multi_index(col);
    for (int i = 0; i < k; ++i) {
      const VectorXc& t = times[static_cast<std::size_t>(multi[static_cast<std::size_t>(i)])];
      for (std::size_t p = 0; p < dim; ++p) {
        const cplx coef = t(static_cast<Eigen::Index>(p));
        if (coef == 0.0) continue;
        auto target = multi;
        target[static_cast<std::size_t>(i)] = static_cast<int>(p);
        m(static_cast<Eigen::Index>(in.index(target)), static_cast<Eigen::Index>(col)) += coef;
      }
    }
  }
  return m;
}

std::vector<CheckRecord> check_adjointness(const BosonicFock& fock, const GramStack& stack,
                                           const Element& zeta, double tol) {
  require_commutative(fock, "bosonic adjointness check");
  double shift_res = 0.0, number_res = 0.0;
  for (int k = 0; k < fock.truncation(); ++k) {
    const MatrixXc b = fock.block(OperatorKind::annihilation, zeta, k + 1);
    const MatrixXc bs = fock.block(OperatorKind::creation, zeta, k);
    const MatrixXc& u_out = stack.symmetric[static_cast<std::size_t>(k + 1)];
    const MatrixXc& u_in = stack.symmetric[static_cast<std::size_t>(k)];
    const MatrixXc lhs = u_out.adjoint() * b.adjoint() * stack.gram[static_cast<std::size_t>(k)] * u_in;
    const MatrixXc rhs = u_out.adjoint() * stack.gram[static_cast<std::size_t>(k + 1)] * bs * u_in;
    shift_res = std::max(shift_res, scaled(max_abs(lhs - rhs), std::max(max_abs(lhs), max_abs(rhs))));
  }
  for (int k = 0; k <= fock.truncation(); ++k) {
    const MatrixXc n = fock.block(OperatorKind::number, zeta, k);
    const MatrixXc n_star = fock.block(OperatorKind::number, star(zeta), k);
    const MatrixXc& u = stack.symmetric[static_cast<std::size_t>(k)];
    const MatrixXc& g = stack.gram[static_cast<std::size_t>(k)];
    const MatrixXc lhs = u.adjoint() * n.adjoint() * g * u;
    const MatrixXc rhs = u.adjoint() * g * n_star * u;
    number_res = std::max(number_res, scaled(max_abs(lhs - rhs), std::max(max_abs(lhs), max_abs(rhs))));
  }
  return {
      asserted("adjointness b/b*", kAdjointLocation, shift_res, tol, shift_res, 0.0,
               "max over grades of U^H (B^H G_k - G_{k+1} B*) U"),
      asserted("adjointness n/n*", kAdjointLocation, number_res, tol, number_res, 0.0,
               "max over grades of U^H (N_z^H G - G N_{z*}) U"),
  };
}

CommutatorMeasurement measure_commutators(const BosonicFock& fock, const Element& phi,
                                          const Element& psi, const Element& zeta) {
  require_commutative(fock, "bosonic commutator check");
  const int top = fock.truncation();
  const Algebra& alg = fock.algebra();
  const std::size_t dim = alg.dimension();
  using K = OperatorKind;
  auto blk = [&](K kind, const Element& s, int k) { return fock.block(kind, s, k); };
  CommutatorMeasurement m;

  for (int k = 0; k + 2 <= top; ++k) {
    const MatrixXc u = symmetric_basis(dim, k);
    const MatrixXc a = blk(K::creation, phi, k + 1) * blk(K::creation, psi, k) * u;
    const MatrixXc b = blk(K::creation, psi, k + 1) * blk(K::creation, phi, k) * u;
    m.bstar_bstar = std::max(m.bstar_bstar, scaled(max_abs(a - b), max_abs(a)));
  }
  for (int k = 2; k <= top; ++k) {
    const MatrixXc u = symmetric_basis(dim, k);
    const MatrixXc a = blk(K::annihilation, phi, k - 1) * blk(K::annihilation, psi, k) * u;
    const MatrixXc b = blk(K::annihilation, psi, k - 1) * blk(K::annihilation, phi, k) * u;
    m.b_b = std::max(m.b_b, scaled(max_abs(a - b), max_abs(a)));
  }
  for (int k = 1; k <= top; ++k) {
    const MatrixXc u = symmetric_basis(dim, k);
    const MatrixXc a = blk(K::number, phi, k) * blk(K::number, psi, k) * u;
    const MatrixXc b = blk(K::number, psi, k) * blk(K::number, phi, k) * u;
    m.n_n = std::max(m.n_n, scaled(max_abs(a - b), max_abs(a)));
  }

  // [b_phi, b*_psi] against alpha gamma0 <phi,psi> Id + beta n_{phi* psi}.
  const cplx overlap = alg.inner(phi, psi);
  const Element mixed = star(phi) * psi;
  Eigen::Matrix2cd normal = Eigen::Matrix2cd::Zero();
  Eigen::Vector2cd rhs = Eigen::Vector2cd::Zero();
  for (int k = 0; k < top; ++k) {
    const MatrixXc u = symmetric_basis(dim, k);
    MatrixXc c = blk(K::annihilation, phi, k + 1) * blk(K::creation, psi, k) * u;
    if (k > 0) c -= blk(K::creation, psi, k - 1) * blk(K::annihilation, phi, k) * u;
    const MatrixXc id_part = (fock.gamma0() * overlap) * u;
    const MatrixXc n_part = blk(K::number, mixed, k) * u;
    const MatrixXc expected = 2.0 * id_part + 4.0 * n_part;
    m.b_bstar = std::max(m.b_bstar, scaled(max_abs(c - expected), max_abs(c)));
    const std::array<const MatrixXc*, 2> cols{&id_part, &n_part};
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) normal(i, j) += frobenius(*cols[i], *cols[j]);
      rhs(i) += frobenius(*cols[i], c);
    }
  }
  const Eigen::Vector2cd coef = normal.completeOrthogonalDecomposition().solve(rhs);
  m.alpha = coef(0).real();
  m.beta = coef(1).real();

  // [n_zeta, b*_psi] = kappa b*_{zeta psi}.
  const Element zeta_psi = zeta * psi;
  cplx vw = 0.0;
  double vv = 0.0;
  std::vector<std::pair<MatrixXc, MatrixXc>> samples;
  for (int k = 0; k < top; ++k) {
    const MatrixXc u = symmetric_basis(dim, k);
    const MatrixXc w = blk(K::number, zeta, k + 1) * blk(K::creation, psi, k) * u -
                       blk(K::creation, psi, k) * blk(K::number, zeta, k) * u;
    const MatrixXc v = blk(K::creation, zeta_psi, k) * u;
    const cplx grade_vw = frobenius(v, w);
    const double grade_vv = v.squaredNorm();
    m.kappa_per_grade.push_back(grade_vv > 0.0 ? (grade_vw / grade_vv).real() : 0.0);
    vw += grade_vw;
    vv += grade_vv;
    samples.emplace_back(w, v);
  }
  m.kappa = vv > 0.0 ? (vw / vv).real() : 0.0;
  for (const auto& [w, v] : samples) {
    m.kappa_fit_residual = std::max(m.kappa_fit_residual, scaled(max_abs(w - m.kappa * v), max_abs(w)));
  }

  // [b_psi, n_zeta] = kappa' b_{zeta* psi}.
  const Element zeta_star_psi = star(zeta) * psi;
  vw = 0.0;
  vv = 0.0;
  for (int k = 1; k <= top; ++k) {
    const MatrixXc u = symmetric_basis(dim, k);
    const MatrixXc w = blk(K::annihilation, psi, k) * blk(K::number, zeta, k) * u -
                       blk(K::number, zeta, k - 1) * blk(K::annihilation, psi, k) * u;
    const MatrixXc v = blk(K::annihilation, zeta_star_psi, k) * u;
    vw += frobenius(v, w);
    vv += v.squaredNorm();
    samples.emplace_back(w, v);
  }
  m.kappa_adjoint = vv > 0.0 ? (vw / vv).real() : 0.0;
  for (std::size_t i = static_cast<std::size_t>(top); i < samples.size(); ++i) {
    const auto& [w, v] = samples[i];
    m.kappa_fit_residual =
        std::max(m.kappa_fit_residual, scaled(max_abs(w - m.kappa_adjoint * v), max_abs(w)));
  }
  return m;
}

std::vector<CheckRecord> check_commutators(const BosonicFock& fock, const Element& phi,
                                           const Element& psi, const Element& zeta, double tol) {
  const CommutatorMeasurement m = measure_commutators(fock, phi, psi, zeta);
  std::vector<CheckRecord> out;
  out.push_back(asserted("commutator [b*,b*] = 0", kCommutationLocation, m.bstar_bstar, tol, m.bstar_bstar, 0.0));
  out.push_back(asserted("commutator [b,b] = 0", kCommutationLocation, m.b_b, tol, m.b_b, 0.0));
  out.push_back(asserted("commutator [n,n] = 0", kCommutationLocation, m.n_n, tol, m.n_n, 0.0));
  out.push_back(asserted("commutator [b,b*] = 2 gamma0 <phi,psi> + 4 n", kCommutationLocation,
                         m.b_bstar, tol, m.b_bstar, 0.0));
  out.push_back(reported("commutator [b,b*] fitted coefficients", kCommutationLocation,
                         Json{{"identity", m.alpha}, {"number", m.beta}},
                         Json{{"identity", 2.0}, {"number", 4.0}},
                         "least-squares fit over all grades below the truncation"));
  out.push_back(reported("commutator [n,b*] coefficient kappa", kCommutationLocation,
                         Json{{"kappa", m.kappa}, {"kappa_adjoint", m.kappa_adjoint},
                              {"per_grade", m.kappa_per_grade}},
                         Json{{"kappa", 2.0}},
                         "stated coefficient is 2; the operator definitions give the measured value"));
  out.push_back(asserted("commutator [n,b*] kappa grade consistency", kCommutationLocation,
                         m.kappa_fit_residual, tol, m.kappa_fit_residual, 0.0));
  return out;
}

NormEstimate measure_norms(const BosonicFock& fock, const GramStack& stack, const Element& phi,
                           int k) {
  require_commutative(fock, "bosonic norm estimate");
  if (k < 1 || k > fock.truncation()) throw Error("norm estimate grade out of range");
  const auto& u_k = stack.symmetric[static_cast<std::size_t>(k)];
  const auto& u_km = stack.symmetric[static_cast<std::size_t>(k - 1)];
  const auto& g_k = stack.compressed[static_cast<std::size_t>(k)];
  const auto& g_km = stack.compressed[static_cast<std::size_t>(k - 1)];
  const MatrixXc b = u_km.adjoint() * fock.block(OperatorKind::annihilation, phi, k) * u_k;
  const MatrixXc bs = u_k.adjoint() * fock.block(OperatorKind::creation, phi, k - 1) * u_km;
  const MatrixXc n = u_k.adjoint() * fock.block(OperatorKind::number, phi, k) * u_k;
  NormEstimate e;
  e.grade = k;
  const GramNorm nb = gram_operator_norm(b, g_k, g_km);
  const GramNorm nbs = gram_operator_norm(bs, g_km, g_k);
  const GramNorm nn = gram_operator_norm(n, g_k, g_k);
  e.annihilation = nb.norm;
  e.creation = nbs.norm;
  e.number = nn.norm;
  e.dropped = std::max({nb.dropped, nbs.dropped, nn.dropped});
  const Algebra& alg = fock.algebra();
  const double kd = static_cast<double>(k);
  e.shift_bound = std::sqrt(2.0 * kd) *
                  (std::sqrt(fock.gamma0()) * alg.l2_norm(phi) + (kd - 1.0) * alg.l_inf_norm(phi));
  e.number_bound = kd * alg.l_inf_norm(phi);
  return e;
}

namespace {
double excess(double value, double bound) {
  if (bound <= 0.0) return value;
  return std::max(0.0, value / bound - 1.0);
}
}  // namespace

std::vector<CheckRecord> check_norm_estimates(const BosonicFock& fock, const GramStack& stack,
                                              const Element& phi, int k, double tol) {
  const NormEstimate e = measure_norms(fock, stack, phi, k);
  const std::string g = " (grade " + std::to_string(k) + ")";
  const std::string notes = e.dropped > 0 ? "singular symmetric Gram: pseudo-inverse used" : "";
  return {
      asserted("norm bound b" + g, kNormLocation, excess(e.annihilation, e.shift_bound), tol,
               e.annihilation, e.shift_bound, notes),
      asserted("norm bound b*" + g, kNormLocation, excess(e.creation, e.shift_bound), tol,
               e.creation, e.shift_bound, notes),
      asserted("norm bound n" + g, kNormLocation, excess(e.number, e.number_bound), tol, e.number,
               e.number_bound, notes),
  };
}

CheckRecord check_positivity(const BosonicFock& fock, const GramStack& stack, double tol) {
  double lowest = 1.0;
  Json per_grade = Json::array();
  for (const auto& g : stack.compressed) {
    const double low = min_hermitian_eigenvalue(g);
    per_grade.push_back(low);
    lowest = std::min(lowest, low);
  }
  const Json measured{{"min_eigenvalue", lowest}, {"per_grade", per_grade}};
  if (!fock.algebra().is_commutative()) {
    return reported("positivity of symmetric Gram (noncommutative algebra)", kPositivityLocation,
                    measured, Json{{"min_eigenvalue_at_least", -tol}},
                    lowest >= -tol ? "positive on tested grades" : "form is not positive");
  }
  return asserted("positivity of symmetric Gram", kPositivityLocation, std::max(0.0, -lowest), tol,
                  measured, Json{{"min_eigenvalue_at_least", -tol}});
}

std::vector<CheckRecord> check_gram_closed_forms(const BosonicFock& fock, const Element& phi,
                                                 const Element& psi, double tol) {
  require_commutative(fock, "Gram closed forms");
  const Algebra& alg = fock.algebra();
  const double g0 = fock.gamma0();
  const VectorXc a = alg.coordinates(phi), b = alg.coordinates(psi);
  auto square = [](const VectorXc& v) {
    VectorXc out(v.size() * v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out.segment(i * v.size(), v.size()) = v(i) * v;
    return out;
  };
  const cplx overlap = alg.state(star(phi) * psi);
  const Element prod = star(phi) * psi;
  const cplx level1 = a.dot(fock.gram(1) * b);
  const cplx closed1 = 2.0 * g0 * overlap;
  std::vector<CheckRecord> out;
  auto relative = [](cplx x, cplx y) { return std::abs(y) > 0.0 ? std::abs(x - y) / std::abs(y) : std::abs(x - y); };
  out.push_back(asserted("Gram closed form grade 1", kGramLocation, relative(level1, closed1), tol,
                         complex_json(level1), complex_json(closed1), "2 gamma0 mu(phi* psi)"));
  if (fock.truncation() >= 2) {
    const cplx level2 = square(a).dot(fock.gram(2) * square(b));
    const cplx closed2 = 2.0 * g0 * g0 * overlap * overlap + 2.0 * g0 * alg.state(prod * prod);
    out.push_back(asserted("Gram closed form grade 2", kGramLocation, relative(level2, closed2), tol,
                           complex_json(level2), complex_json(closed2),
                           "2 gamma0^2 mu(phi* psi)^2 + 2 gamma0 mu((phi* psi)^2)"));
  }
  return out;
}

CheckRecord check_symmetry_preservation(const BosonicFock& fock, int words, std::mt19937_64& rng, double tol) {
  require_commutative(fock, "symmetry preservation");
  const Algebra& alg = fock.algebra();
  const int top = fock.truncation();
  const std::size_t dim = alg.dimension();
  std::vector<std::vector<MatrixXc>> swaps(static_cast<std::size_t>(top + 1));
  for (int k = 2; k <= top; ++k) {
    for (int i = 0; i + 1 < k; ++i) {
      std::vector<int> perm(static_cast<std::size_t>(k));
      for (int r = 0; r < k; ++r) perm[static_cast<std::size_t>(r)] = r;
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i + 1)]);
      swaps[static_cast<std::size_t>(k)].push_back(slot_permutation(dim, k, perm));
    }
  }
  std::uniform_int_distribution<int> kind(0, 2), length(1, 2 * top);
  double worst = 0.0;
  for (int w = 0; w < words; ++w) {
    GradedVector v = fock.vacuum();
    for (int step = length(rng); step > 0; --step) {
      auto k = static_cast<OperatorKind>(kind(rng));
      if (k == OperatorKind::creation && v.top_grade() == top) k = OperatorKind::annihilation;
      v = fock.apply(k, alg.random(rng), v);
    }
    for (int k = 2; k <= top; ++k) {
      const VectorXc& x = v.grade(k);
      for (const auto& p : swaps[static_cast<std::size_t>(k)]) {
        worst = std::max(worst, scaled(max_abs(p * x - x), max_abs(x)));
      }
    }
  }
  return asserted("symmetric tensors preserved by b*, b, n", kSymmetryLocation, worst, tol, worst, 0.0,
                  std::to_string(words) + " random words applied to the vacuum");
}

double gram_path_deviation(const BosonicFock& fock, int k) {
  const MatrixXc literal = fock.gram(k, GramMethod::ordered_partitions);
  const MatrixXc fast = fock.gram(k, GramMethod::set_partitions);
  return scaled(max_abs(literal - fast), max_abs(literal));
}

}  // namespace qwn
