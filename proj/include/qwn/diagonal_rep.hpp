#pragma once

#include <random>
#include <vector>

#include "qwn/algebra.hpp"
#include "qwn/fock.hpp"
#include "qwn/report.hpp"

namespace qwn {

/// Point weights of mu_k on M^k, indexed like TensorBasis (first variable
/// most significant).
struct DiagonalMeasure {
  int k = 0;
  std::size_t points = 0;
  Eigen::VectorXd weights;

  double total_mass() const { return weights.sum(); }
};

inline constexpr std::size_t kMaxDiagonalTuples = 1000000;

/// Functions on M^k with the measure mu_k: a sum over ordered partitions of
/// pull-backs of product measures onto the multidiagonals of M^k.
class DiagonalRepresentation {
 public:
  DiagonalRepresentation(double gamma0, PointMeasureSpace space);

  double gamma0() const { return gamma0_; }
  const PointMeasureSpace& space() const { return space_; }

  DiagonalMeasure build_measure(int k) const;

  /// Integral of conj(phi) psi against mu_k.
  static cplx inner_product(const DiagonalMeasure& mu, const VectorXc& phi, const VectorXc& psi);

  /// Pointwise b*, b, n with symbol values f on M; psi lives on M^k.
  VectorXc apply(OperatorKind kind, const VectorXc& f, const VectorXc& psi, int k) const;

 private:
  double gamma0_;
  PointMeasureSpace space_;
};

/// Compares measures, inner products and operator actions against the tensor
/// implementation for grades up to `truncation`, on random symmetric vectors.
std::vector<CheckRecord> check_diagonal_against_tensor(const DiagonalRepresentation& rep,
                                                       int truncation, int trials,
                                                       std::mt19937_64& rng, double tol = 1e-10);

}  // namespace qwn
