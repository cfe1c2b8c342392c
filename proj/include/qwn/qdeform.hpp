#pragma once

#include <vector>

#include "qwn/fock.hpp"
#include "qwn/report.hpp"

namespace qwn {

struct QParams {
  double q = 0.5;
  int truncation = 4;
  // One-particle space L^2 over these atoms.
  PointMeasureSpace modes;
};

inline constexpr int kMaxQTruncation = 5;

/// Truncated q-deformed Fock space over L^2 of a finite point space. Only
/// creation and annihilation are defined; number blocks throw.
class QFock : public FockSpace {
 public:
  explicit QFock(QParams params);

  double q() const { return params_.q; }
  const PointMeasureSpace& modes() const { return params_.modes; }

  /// sum over permutations of q^inv(sigma) times products of one-particle
  /// inner products.
  MatrixXc gram(int k) const override;
  MatrixXc block(OperatorKind kind, const Element& symbol, int source) const override;

  /// a*_psi a_phi on grade k.
  MatrixXc transition(const Element& psi, const Element& phi, int k) const;

 private:
  QParams params_;
};

/// Blocks of atoms of equal mass l, for the discretized squared relation.
struct ModeBlocks {
  double l = 1.0;
  std::vector<std::vector<int>> blocks;
};

/// Validates a block structure: disjoint atom sets each of mass l (relative
/// 1e-12). Throws on failure.
void validate_blocks(const PointMeasureSpace& modes, const ModeBlocks& blocks);
/// Values of a piecewise-constant function on the blocks; throws when the
/// function is not constant on some block or nonzero off the blocks.
VectorXc block_values(const QFock& fock, const ModeBlocks& blocks, const Element& f);
/// sum_i values_i chi_i.
Element piecewise(const QFock& fock, const ModeBlocks& blocks, const VectorXc& values);

std::vector<CheckRecord> check_q_relation(const QFock& fock, const Element& phi, const Element& psi,
                                          double tol = 1e-9);
CheckRecord check_squared_relation(const QFock& fock, const Element& zeta, const Element& xi,
                                   double tol = 1e-9);
CheckRecord check_q_adjointness(const QFock& fock, const Element& zeta, double tol = 1e-10);
/// Strict positive definiteness for |q| < 1; at q = 1 on the symmetric subspace.
CheckRecord check_q_positivity(const QFock& fock);

/// b_phi b*_psi - q^4 b*_psi b_phi against the discretized right-hand side,
/// as matrix elements between tensors of block indicators. phi, psi must be
/// piecewise constant on the blocks.
std::vector<CheckRecord> check_discretized_sss(const QFock& fock, const ModeBlocks& blocks,
                                               const Element& phi, const Element& psi,
                                               double tol = 1e-9);

}  // namespace qwn
