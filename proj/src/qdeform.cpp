#include "qwn/qdeform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qwn/bosonic_fock.hpp"
#include "qwn/combinatorics.hpp"
#include "qwn/linalg.hpp"
#include "qwn/tensor.hpp"

namespace qwn {

namespace {

constexpr const char* kRelationLocation = "q-deformed white noise: commutation relation a a* - q a* a";
constexpr const char* kSquareLocation = "q-deformed white noise: relation for squares of a and a*";
constexpr const char* kSssLocation = "q-deformed white noise: discretized relation for b and b*";
constexpr const char* kGramLocation = "q-deformed white noise: Fock representation";

double scaled(double diff, double scale) { return diff / std::max(1.0, scale); }

std::vector<int> identity_perm(int k) {
  std::vector<int> p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// Columns are tensors of block indicators chi_{i_1} (x) ... (x) chi_{i_k}.
MatrixXc indicator_tensors(const QFock& fock, const ModeBlocks& blocks, int k) {
  const std::size_t atoms = fock.modes().size();
  const std::size_t nb = blocks.blocks.size();
  const TensorBasis atom_basis(atoms, k), block_basis(nb, k);
  std::vector<int> owner(atoms, -1);
  for (std::size_t b = 0; b < nb; ++b)
    for (int a : blocks.blocks[b]) owner[static_cast<std::size_t>(a)] = static_cast<int>(b);
  MatrixXc w = MatrixXc::Zero(static_cast<Eigen::Index>(atom_basis.size()),
                              static_cast<Eigen::Index>(block_basis.size()));
  for (std::size_t row = 0; row < atom_basis.size(); ++row) {
    std::vector<int> multi = atom_basis.multi_index(row);
    bool inside = true;
    for (int& a : multi) {
      a = owner[static_cast<std::size_t>(a)];
      inside = inside && a >= 0;
    }
    if (inside) w(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(block_basis.index(multi))) = 1.0;
  }
  return w;
}

}  // namespace

QFock::QFock(QParams params)
    : FockSpace(Algebra::functions(params.modes), params.truncation), params_(std::move(params)) {
  if (!(params_.q > -1.0 && params_.q <= 1.0)) throw Error("q must lie in (-1, 1]");
  if (params_.truncation > kMaxQTruncation) throw Error("q-Fock truncation above 5");
}

MatrixXc QFock::gram(int k) const {
  check_grade(k);
  const std::size_t d = modes().size();
  const TensorBasis tb(d, k);
  const auto n = static_cast<Eigen::Index>(tb.size());
  MatrixXc g = MatrixXc::Zero(n, n);
  std::vector<std::pair<std::vector<int>, double>> perms;
  std::vector<int> sigma = identity_perm(k);
  do {
    perms.emplace_back(sigma, std::pow(params_.q, static_cast<double>(inversion_count(sigma))));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  std::vector<int> target(static_cast<std::size_t>(k));
  for (std::size_t row = 0; row < tb.size(); ++row) {
    const auto multi = tb.multi_index(row);
    double w = 1.0;
    for (int a : multi) w *= modes().weight(static_cast<std::size_t>(a));
    for (const auto& [perm, coef] : perms) {
      if (coef == 0.0) continue;
      for (int r = 0; r < k; ++r) {
        target[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])] = multi[static_cast<std::size_t>(r)];
      }
      g(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(tb.index(target))) += coef * w;
    }
  }
  return g;
}

MatrixXc QFock::block(OperatorKind kind, const Element& symbol, int source) const {
  algebra().check(symbol);
  if (kind == OperatorKind::number) throw Error("q-Fock space has no number operator block");
  const int k = source;
  check_grade(k);
  check_grade(k + grade_shift(kind));
  const std::size_t d = modes().size();
  const TensorBasis in(d, k), out(d, k + grade_shift(kind));
  MatrixXc m = MatrixXc::Zero(static_cast<Eigen::Index>(out.size()), static_cast<Eigen::Index>(in.size()));
  const VectorXc f = symbol.value().col(0);
  for (std::size_t col = 0; col < in.size(); ++col) {
    const auto multi = in.multi_index(col);
    if (kind == OperatorKind::creation) {
      for (std::size_t p = 0; p < d; ++p) {
        if (f(static_cast<Eigen::Index>(p)) == 0.0) continue;
        std::vector<int> target{static_cast<int>(p)};
        target.insert(target.end(), multi.begin(), multi.end());
        m(static_cast<Eigen::Index>(out.index(target)), static_cast<Eigen::Index>(col)) += f(static_cast<Eigen::Index>(p));
      }
    } else {
      double qpow = 1.0;
      for (int i = 0; i < k; ++i) {
        const auto a = static_cast<std::size_t>(multi[static_cast<std::size_t>(i)]);
        const cplx overlap = std::conj(f(static_cast<Eigen::Index>(a))) * modes().weight(a);
        if (overlap != 0.0 && qpow != 0.0) {
          auto rest = multi;
          rest.erase(rest.begin() + i);
          m(static_cast<Eigen::Index>(out.index(rest)), static_cast<Eigen::Index>(col)) += qpow * overlap;
        }
        qpow *= params_.q;
      }
    }
  }
  return m;
}

MatrixXc QFock::transition(const Element& psi, const Element& phi, int k) const {
  if (k == 0) return MatrixXc::Zero(1, 1);
  return block(OperatorKind::creation, psi, k - 1) * block(OperatorKind::annihilation, phi, k);
}

void validate_blocks(const PointMeasureSpace& modes, const ModeBlocks& blocks) {
  if (!(blocks.l > 0.0)) throw Error("block mass l must be positive");
  if (blocks.blocks.empty()) throw Error("no mode blocks");
  std::vector<bool> used(modes.size(), false);
  for (const auto& block : blocks.blocks) {
    if (block.empty()) throw Error("empty mode block");
    double mass = 0.0;
    for (int a : block) {
      if (a < 0 || static_cast<std::size_t>(a) >= modes.size()) throw Error("mode block atom out of range");
      if (used[static_cast<std::size_t>(a)]) throw Error("mode blocks overlap");
      used[static_cast<std::size_t>(a)] = true;
      mass += modes.weight(static_cast<std::size_t>(a));
    }
    if (std::abs(mass - blocks.l) > 1e-12 * blocks.l) throw Error("mode block mass differs from l");
  }
}

VectorXc block_values(const QFock& fock, const ModeBlocks& blocks, const Element& f) {
  fock.algebra().check(f);
  const VectorXc v = f.value().col(0);
  VectorXc out(static_cast<Eigen::Index>(blocks.blocks.size()));
  std::vector<bool> covered(fock.modes().size(), false);
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
    const cplx first = v(blocks.blocks[b].front());
    for (int a : blocks.blocks[b]) {
      covered[static_cast<std::size_t>(a)] = true;
      if (std::abs(v(a) - first) > 1e-14 * scale) throw Error("function is not piecewise constant on the blocks");
    }
    out(static_cast<Eigen::Index>(b)) = first;
  }
  for (std::size_t a = 0; a < covered.size(); ++a) {
    if (!covered[a] && v(static_cast<Eigen::Index>(a)) != 0.0) throw Error("function is nonzero outside the blocks");
  }
  return out;
}

Element piecewise(const QFock& fock, const ModeBlocks& blocks, const VectorXc& values) {
  VectorXc v = VectorXc::Zero(static_cast<Eigen::Index>(fock.modes().size()));
  for (std::size_t b = 0; b < blocks.blocks.size(); ++b)
    for (int a : blocks.blocks[b]) v(a) = values(static_cast<Eigen::Index>(b));
  return fock.algebra().from_values(v);
}

std::vector<CheckRecord> check_q_relation(const QFock& fock, const Element& phi, const Element& psi,
                                          double tol) {
  using K = OperatorKind;
  const cplx overlap = fock.algebra().inner(phi, psi);
  double worst = 0.0, vacuum = 0.0;
  for (int k = 0; k < fock.truncation(); ++k) {
    const auto n = static_cast<Eigen::Index>(fock.grade_size(k));
    MatrixXc lhs = fock.block(K::annihilation, phi, k + 1) * fock.block(K::creation, psi, k);
    if (k > 0) lhs -= fock.q() * fock.block(K::creation, psi, k - 1) * fock.block(K::annihilation, phi, k);
    const MatrixXc rhs = overlap * MatrixXc::Identity(n, n);
    const double r = scaled(max_abs(lhs - rhs), max_abs(rhs));
    if (k == 0) vacuum = r;
    worst = std::max(worst, r);
  }
  const std::string q = " (q=" + Json(fock.q()).dump() + ")";
  return {
      asserted("q relation a_phi a*_psi - q a*_psi a_phi = <phi,psi>" + q, kRelationLocation, worst, tol,
               worst, 0.0, "block identity on grades below the truncation"),
      asserted("q relation on the vacuum" + q, kRelationLocation, vacuum, tol, vacuum, 0.0),
  };
}

CheckRecord check_squared_relation(const QFock& fock, const Element& zeta, const Element& xi, double tol) {
  using K = OperatorKind;
  if (fock.truncation() < 4) throw Error("squared relation needs truncation >= 4");
  const double q = fock.q();
  const cplx c = fock.algebra().inner(zeta, xi);
  double worst = 0.0;
  for (int k = 0; k + 2 <= fock.truncation(); ++k) {
    const auto n = static_cast<Eigen::Index>(fock.grade_size(k));
    MatrixXc lhs = fock.block(K::annihilation, zeta, k + 1) * fock.block(K::annihilation, zeta, k + 2) *
                   fock.block(K::creation, xi, k + 1) * fock.block(K::creation, xi, k);
    if (k >= 2) {
      lhs -= std::pow(q, 4) * fock.block(K::creation, xi, k - 1) * fock.block(K::creation, xi, k - 2) *
             fock.block(K::annihilation, zeta, k - 1) * fock.block(K::annihilation, zeta, k);
    }
    const MatrixXc rhs = (1.0 + q) * c * c * MatrixXc::Identity(n, n) +
                         q * (1.0 + q) * (1.0 + q) * c * fock.transition(xi, zeta, k);
    worst = std::max(worst, scaled(max_abs(lhs - rhs), max_abs(rhs)));
  }
  return asserted("q squared relation (q=" + Json(q).dump() + ")", kSquareLocation, worst, tol, worst, 0.0,
                  "grades <= N-2");
}

CheckRecord check_q_adjointness(const QFock& fock, const Element& zeta, double tol) {
  using K = OperatorKind;
  const bool symmetric = fock.q() == 1.0;
  double worst = 0.0;
  MatrixXc g_low = fock.gram(0);
  for (int k = 0; k < fock.truncation(); ++k) {
    const MatrixXc g_high = fock.gram(k + 1);
    MatrixXc lhs = fock.block(K::annihilation, zeta, k + 1).adjoint() * g_low;
    MatrixXc rhs = g_high * fock.block(K::creation, zeta, k);
    if (symmetric) {
      const MatrixXc u_in = symmetric_basis(fock.modes().size(), k);
      const MatrixXc u_out = symmetric_basis(fock.modes().size(), k + 1);
      lhs = u_out.adjoint() * lhs * u_in;
      rhs = u_out.adjoint() * rhs * u_in;
    }
    worst = std::max(worst, scaled(max_abs(lhs - rhs), max_abs(rhs)));
    g_low = g_high;
  }
  return asserted("q adjointness a/a* (q=" + Json(fock.q()).dump() + ")", kGramLocation, worst, tol, worst, 0.0,
                  symmetric ? "symmetric subspace" : "");
}

CheckRecord check_q_positivity(const QFock& fock) {
  const bool symmetric = fock.q() == 1.0;
  double lowest = std::numeric_limits<double>::infinity();
  Json per_grade = Json::array();
  for (int k = 0; k <= fock.truncation(); ++k) {
    MatrixXc g = fock.gram(k);
    if (symmetric) g = compress(g, symmetric_basis(fock.modes().size(), k));
    const double low = min_hermitian_eigenvalue(g);
    per_grade.push_back(low);
    lowest = std::min(lowest, low);
  }
  // Strictness is the claim, so the residual is an indicator.
  return asserted("q Gram positive definite (q=" + Json(fock.q()).dump() + ")", kGramLocation,
                  lowest > 0.0 ? 0.0 : 1.0, 0.0, Json{{"min_eigenvalue", lowest}, {"per_grade", per_grade}},
                  Json{{"min_eigenvalue_above", 0.0}}, symmetric ? "symmetric subspace" : "");
}

std::vector<CheckRecord> check_discretized_sss(const QFock& fock, const ModeBlocks& blocks,
                                               const Element& phi, const Element& psi, double tol) {
  using K = OperatorKind;
  validate_blocks(fock.modes(), blocks);
  const VectorXc pv = block_values(fock, blocks, phi);
  const VectorXc sv = block_values(fock, blocks, psi);
  const Algebra& alg = fock.algebra();
  const double q = fock.q();
  const int top = fock.truncation();
  if (top < 2) throw Error("discretized relation needs truncation >= 2");
  const std::size_t nb = blocks.blocks.size();
  // A_i = a_{chi_i / sqrt(l)}; u_j = e_j / sqrt(w_j) normalized atoms.
  std::vector<Element> unit_block;
  for (std::size_t i = 0; i < nb; ++i) {
    VectorXc e = VectorXc::Zero(static_cast<Eigen::Index>(nb));
    e(static_cast<Eigen::Index>(i)) = 1.0 / std::sqrt(blocks.l);
    unit_block.push_back(piecewise(fock, blocks, e));
  }
  auto b_op = [&](int k) {  // b_phi from grade k to k - 2
    MatrixXc m = MatrixXc::Zero(static_cast<Eigen::Index>(fock.grade_size(k - 2)),
                                static_cast<Eigen::Index>(fock.grade_size(k)));
    for (std::size_t i = 0; i < nb; ++i) {
      m += std::conj(pv(static_cast<Eigen::Index>(i))) * fock.block(K::annihilation, unit_block[i], k - 1) *
           fock.block(K::annihilation, unit_block[i], k);
    }
    return m;
  };
  auto bstar_op = [&](int k) {  // b*_psi from grade k to k + 2
    MatrixXc m = MatrixXc::Zero(static_cast<Eigen::Index>(fock.grade_size(k + 2)),
                                static_cast<Eigen::Index>(fock.grade_size(k)));
    for (std::size_t i = 0; i < nb; ++i) {
      m += sv(static_cast<Eigen::Index>(i)) * fock.block(K::creation, unit_block[i], k + 1) *
           fock.block(K::creation, unit_block[i], k);
    }
    return m;
  };
  const cplx integral = alg.inner(phi, psi);  // int psi conj(phi) dmu
  double worst = 0.0, vacuum = 0.0;
  cplx vacuum_value = 0.0;
  for (int k = 0; k + 2 <= top; ++k) {
    const auto n = static_cast<Eigen::Index>(fock.grade_size(k));
    MatrixXc lhs = b_op(k + 2) * bstar_op(k);
    if (k >= 2) lhs -= std::pow(q, 4) * bstar_op(k - 2) * b_op(k);
    MatrixXc number = MatrixXc::Zero(n, n);
    for (std::size_t i = 0; i < nb; ++i) {
      const cplx c = sv(static_cast<Eigen::Index>(i)) * std::conj(pv(static_cast<Eigen::Index>(i)));
      for (int a : blocks.blocks[i]) {
        VectorXc e = VectorXc::Zero(static_cast<Eigen::Index>(fock.modes().size()));
        e(a) = 1.0 / std::sqrt(fock.modes().weight(static_cast<std::size_t>(a)));
        const Element u = alg.from_values(e);
        number += c * fock.transition(u, u, k);
      }
    }
    const MatrixXc rhs = (1.0 + q) / blocks.l * integral * MatrixXc::Identity(n, n) +
                         q * (1.0 + q) * (1.0 + q) * number;
    const MatrixXc w = indicator_tensors(fock, blocks, k);
    const MatrixXc g = fock.gram(k);
    const MatrixXc lhs_el = w.adjoint() * g * lhs * w;
    const MatrixXc rhs_el = w.adjoint() * g * rhs * w;
    const double r = scaled(max_abs(lhs_el - rhs_el), max_abs(rhs_el));
    if (k == 0) {
      vacuum = r;
      vacuum_value = lhs(0, 0);
    }
    worst = std::max(worst, r);
  }
  const std::string tag = " (q=" + Json(q).dump() + ", l=" + Json(blocks.l).dump() + ")";
  std::vector<CheckRecord> out{
      asserted("discretized b b* relation, piecewise-constant matrix elements" + tag, kSssLocation, worst, tol,
               worst, 0.0, "between tensors of block indicators, grades <= N-2"),
      asserted("discretized b b* relation on the vacuum" + tag, kSssLocation, vacuum, tol,
               complex_json(vacuum_value), complex_json((1.0 + q) / blocks.l * integral)),
  };
  if (q == 1.0 && blocks.l == 1.0 && top >= 3) {
    // Bosonic comparison with gamma0 = 1 / l = 1 over one point per block.
    std::vector<double> masses(nb, blocks.l);
    const Algebra block_alg = Algebra::functions(PointMeasureSpace(masses));
    const BosonicFock bos({1.0 / blocks.l, 2, block_alg});
    const Element bphi = block_alg.from_values(pv), bpsi = block_alg.from_values(sv);
    const MatrixXc bos_comm = bos.block(K::annihilation, bphi, 2) * bos.block(K::creation, bpsi, 1) -
                              bos.block(K::creation, bpsi, 0) * bos.block(K::annihilation, bphi, 1);
    // Grade 1: chi_i in the q space corresponds to the delta at block i.
    const MatrixXc w = indicator_tensors(fock, blocks, 1);
    const MatrixXc q_comm = b_op(3) * bstar_op(1) * w;  // b vanishes on grade 1
    const double dev = scaled(max_abs(q_comm - w * bos_comm), max_abs(bos_comm));
    const cplx bos_vacuum =
        bos.vacuum_expectation(std::vector<FockLetter>{{K::annihilation, bphi}, {K::creation, bpsi}});
    const double vac_dev = std::abs(bos_vacuum - vacuum_value) / std::max(1.0, std::abs(bos_vacuum));
    out.push_back(asserted("discretized relation matches bosonic commutator at q=1, l=1", kSssLocation,
                           std::max(dev, vac_dev), tol, Json{{"grade1", dev}, {"vacuum", vac_dev}}, 0.0,
                           "bosonic space over one point per block with gamma0 = 1"));
  }
  return out;
}

}  // namespace qwn
