#include "qwn/diagonal_rep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qwn/bosonic_fock.hpp"
#include "qwn/combinatorics.hpp"
#include "qwn/linalg.hpp"
#include "qwn/tensor.hpp"

namespace qwn {

namespace {
constexpr const char* kMeasureLocation =
    "bosonic quadratic Fock space, function representation: measure on multidiagonals";
constexpr const char* kOperatorLocation =
    "bosonic quadratic Fock space, function representation: pointwise operator formulas";
}  // namespace

DiagonalRepresentation::DiagonalRepresentation(double gamma0, PointMeasureSpace space)
    : gamma0_(gamma0), space_(std::move(space)) {
  if (!(gamma0_ > 0.0)) throw Error("gamma0 must be positive");
}

DiagonalMeasure DiagonalRepresentation::build_measure(int k) const {
  if (k < 0) throw Error("negative grade");
  if (k > kMaxOrderedPartitionSize) throw Error("grade exceeds ordered partition cap");
  const std::size_t d = space_.size();
  const std::size_t tuples = checked_power(d, k, kMaxDiagonalTuples);
  DiagonalMeasure mu{k, d, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(tuples))};
  if (k == 0) {
    mu.weights(0) = 1.0;
    return mu;
  }
  const TensorBasis target(d, k);
  for_each_ordered_partition(k, [&](const OrderedPartition& pi) {
    const int m = static_cast<int>(pi.blocks.size());
    double coef = std::pow(gamma0_, m);
    for (const auto& block : pi.blocks) coef /= static_cast<double>(block.size());
    const TensorBasis source(d, m);
    std::vector<int> x(static_cast<std::size_t>(k));
    for (std::size_t flat = 0; flat < source.size(); ++flat) {
      const auto y = source.multi_index(flat);
      double w = coef;
      for (int s = 0; s < m; ++s) {
        const int ys = y[static_cast<std::size_t>(s)];
        w *= space_.weight(static_cast<std::size_t>(ys));
        for (int r : pi.blocks[static_cast<std::size_t>(s)]) x[static_cast<std::size_t>(r)] = ys;
      }
      mu.weights(static_cast<Eigen::Index>(target.index(x))) += w;
    }
  });
  mu.weights *= std::pow(2.0, k) / factorial(static_cast<unsigned>(k)).convert_to<double>();
  return mu;
}

cplx DiagonalRepresentation::inner_product(const DiagonalMeasure& mu, const VectorXc& phi,
                                           const VectorXc& psi) {
  if (phi.size() != mu.weights.size() || psi.size() != mu.weights.size()) {
    throw Error("function size does not match the measure");
  }
  return (phi.conjugate().cwiseProduct(psi).array() * mu.weights.array().cast<cplx>()).sum();
}

VectorXc DiagonalRepresentation::apply(OperatorKind kind, const VectorXc& f, const VectorXc& psi,
                                       int k) const {
  const std::size_t d = space_.size();
  if (static_cast<std::size_t>(f.size()) != d) throw Error("symbol size does not match M");
  const TensorBasis in(d, k);
  if (static_cast<std::size_t>(psi.size()) != in.size()) throw Error("function size does not match grade");
  switch (kind) {
    case OperatorKind::number: {
      VectorXc out(psi.size());
      for (std::size_t flat = 0; flat < in.size(); ++flat) {
        cplx sum = 0.0;
        for (int xi : in.multi_index(flat)) sum += f(xi);
        out(static_cast<Eigen::Index>(flat)) = psi(static_cast<Eigen::Index>(flat)) * sum;
      }
      return out;
    }
    case OperatorKind::creation: {
      const TensorBasis out_basis(d, k + 1);
      VectorXc out = VectorXc::Zero(static_cast<Eigen::Index>(out_basis.size()));
      for (std::size_t flat = 0; flat < out_basis.size(); ++flat) {
        const auto x = out_basis.multi_index(flat);
        cplx sum = 0.0;
        for (int i = 0; i <= k; ++i) {
          auto rest = x;
          rest.erase(rest.begin() + i);
          sum += f(x[static_cast<std::size_t>(i)]) * psi(static_cast<Eigen::Index>(in.index(rest)));
        }
        out(static_cast<Eigen::Index>(flat)) = sum;
      }
      return out;
    }
    case OperatorKind::annihilation: {
      if (k < 1) throw Error("annihilation needs grade >= 1");
      const TensorBasis out_basis(d, k - 1);
      VectorXc out = VectorXc::Zero(static_cast<Eigen::Index>(out_basis.size()));
      for (std::size_t flat = 0; flat < out_basis.size(); ++flat) {
        auto x = out_basis.multi_index(flat);
        cplx integral = 0.0;
        x.push_back(0);
        for (std::size_t y = 0; y < d; ++y) {
          x.back() = static_cast<int>(y);
          integral += std::conj(f(static_cast<Eigen::Index>(y))) * space_.weight(y) *
                      psi(static_cast<Eigen::Index>(in.index(x)));
        }
        x.pop_back();
        cplx doubled = 0.0;
        for (int i = 0; i < k - 1; ++i) {
          auto dup = x;
          dup.insert(dup.begin() + i, x[static_cast<std::size_t>(i)]);
          doubled += std::conj(f(x[static_cast<std::size_t>(i)])) * psi(static_cast<Eigen::Index>(in.index(dup)));
        }
        out(static_cast<Eigen::Index>(flat)) = 2.0 * gamma0_ * integral + 2.0 * doubled;
      }
      return out;
    }
  }
  return {};
}

std::vector<CheckRecord> check_diagonal_against_tensor(const DiagonalRepresentation& rep,
                                                       int truncation, int trials,
                                                       std::mt19937_64& rng, double tol) {
  const Algebra alg = Algebra::functions(rep.space());
  const BosonicFock fock({rep.gamma0(), truncation, alg});
  const std::size_t d = rep.space().size();
  double gram_dev = 0.0, inner_dev = 0.0, lowest = std::numeric_limits<double>::infinity();
  double op_dev[3] = {0.0, 0.0, 0.0};
  std::vector<MatrixXc> sym;
  std::vector<DiagonalMeasure> measures;
  for (int k = 0; k <= truncation; ++k) {
    measures.push_back(rep.build_measure(k));
    sym.push_back(symmetric_basis(d, k));
    const MatrixXc g = fock.gram(k, GramMethod::ordered_partitions);
    const MatrixXc diag = measures.back().weights.cast<cplx>().asDiagonal();
    gram_dev = std::max(gram_dev, max_abs(g - diag) / std::max(1.0, max_abs(g)));
    lowest = std::min(lowest, measures.back().weights.minCoeff());
  }
  auto random_symmetric = [&](int k) -> VectorXc {
    const MatrixXc& u = sym[static_cast<std::size_t>(k)];
    return u * random_vector(rng, u.cols());
  };
  for (int t = 0; t < trials; ++t) {
    const Element f = alg.random(rng);
    for (int k = 0; k <= truncation; ++k) {
      const VectorXc a = random_symmetric(k), b = random_symmetric(k);
      const MatrixXc g = fock.gram(k, GramMethod::ordered_partitions);
      const cplx tensor_value = a.dot(g * b);
      const cplx diag_value = DiagonalRepresentation::inner_product(measures[static_cast<std::size_t>(k)], a, b);
      inner_dev = std::max(inner_dev, std::abs(tensor_value - diag_value) / std::max(1.0, std::abs(tensor_value)));
      const VectorXc fv = f.value().col(0);
      const auto compare = [&](int slot, OperatorKind kind) {
        const VectorXc lhs = rep.apply(kind, fv, a, k);
        const VectorXc rhs = fock.block(kind, f, k) * a;
        op_dev[slot] = std::max(op_dev[slot], max_abs(lhs - rhs) / std::max(1.0, max_abs(rhs)));
      };
      compare(2, OperatorKind::number);
      if (k < truncation) compare(0, OperatorKind::creation);
      if (k >= 1) compare(1, OperatorKind::annihilation);
    }
  }
  return {
      asserted("diagonal measure equals tensor Gram", kMeasureLocation, gram_dev, tol, gram_dev, 0.0,
               "tensor Gram in the delta basis against diag(mu_k), all k <= N"),
      asserted("diagonal measure nonnegative", kMeasureLocation, std::max(0.0, -lowest), 0.0, lowest,
               Json{{"min_weight_at_least", 0.0}}),
      asserted("diagonal inner product matches tensor form", kMeasureLocation, inner_dev, tol, inner_dev, 0.0),
      asserted("diagonal b* matches tensor b*", kOperatorLocation, op_dev[0], tol, op_dev[0], 0.0),
      asserted("diagonal b matches tensor b", kOperatorLocation, op_dev[1], tol, op_dev[1], 0.0,
               "symmetric vectors: integration over the last variable equals dropping the first slot"),
      asserted("diagonal n matches tensor n", kOperatorLocation, op_dev[2], tol, op_dev[2], 0.0),
  };
}

}  // namespace qwn
