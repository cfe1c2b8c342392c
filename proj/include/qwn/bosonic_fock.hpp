#pragma once

#include <random>
#include <vector>

#include "qwn/fock.hpp"
#include "qwn/report.hpp"

namespace qwn {

struct BosonicParams {
  double gamma0 = 1.0;
  int truncation = 3;
  Algebra algebra;
};

enum class GramMethod {
  // Literal sum over ordered partitions with weights gamma0 / n_p.
  ordered_partitions,
  // Commutative reduction: set partitions with weights gamma0 (n_p - 1)!.
  set_partitions,
};

/// Per-grade Gram matrices on the full tensor basis, together with an
/// orthonormal basis of each symmetric subspace and the compressed Grams.
struct GramStack {
  std::vector<MatrixXc> gram;
  std::vector<MatrixXc> symmetric;  // U_k, orthonormal columns
  std::vector<MatrixXc> compressed;  // U_k^H G_k U_k

  /// Symmetrizer P_k = U_k U_k^H.
  MatrixXc projector(int k) const;
};

/// The quadratic bosonic Fock space: symmetric tensor powers of the algebra
/// with the partition-weighted form, and the operators b*, b, n.
class BosonicFock : public FockSpace {
 public:
  explicit BosonicFock(BosonicParams params);

  const BosonicParams& params() const { return params_; }
  double gamma0() const { return params_.gamma0; }

  MatrixXc gram(int k) const override { return gram(k, default_method()); }
  MatrixXc gram(int k, GramMethod method) const;
  GramMethod default_method() const;
  GramStack gram_stack() const;

  MatrixXc block(OperatorKind kind, const Element& symbol, int source) const override;

 private:
  MatrixXc creation_block(const Element& psi, int k) const;
  MatrixXc annihilation_block(const Element& psi, int k) const;
  MatrixXc number_block(const Element& psi, int k) const;

  BosonicParams params_;
};

// Checks. Residuals are max-abs entry differences divided by max(1, scale),
// where scale is the largest entry among the compared quantities.

/// <b_z Psi, Phi> = <Psi, b*_z Phi> and n_z^dagger = n_{z*}, on symmetric tensors.
std::vector<CheckRecord> check_adjointness(const BosonicFock& fock, const GramStack& stack,
                                           const Element& zeta, double tol = 1e-9);

struct CommutatorMeasurement {
  double bstar_bstar = 0.0;
  double b_b = 0.0;
  double n_n = 0.0;
  // Residual of [b_phi, b*_psi] - 2 gamma0 <phi,psi> - 4 n_{phi* psi}.
  double b_bstar = 0.0;
  // Least-squares fit of [b_phi, b*_psi] = alpha gamma0 <phi,psi> + beta n_{phi* psi}.
  double alpha = 0.0;
  double beta = 0.0;
  // [n_zeta, b*_psi] = kappa b*_{zeta psi} and [b_psi, n_zeta] = kappa' b_{zeta* psi}.
  double kappa = 0.0;
  double kappa_adjoint = 0.0;
  std::vector<double> kappa_per_grade;
  double kappa_fit_residual = 0.0;
};

CommutatorMeasurement measure_commutators(const BosonicFock& fock, const Element& phi,
                                          const Element& psi, const Element& zeta);

std::vector<CheckRecord> check_commutators(const BosonicFock& fock, const Element& phi,
                                           const Element& psi, const Element& zeta,
                                           double tol = 1e-10);

struct NormEstimate {
  int grade = 0;
  double annihilation = 0.0;  // grade k -> k-1
  double creation = 0.0;      // grade k-1 -> k
  double number = 0.0;        // grade k -> k
  double shift_bound = 0.0;   // sqrt(2k) (sqrt(gamma0) |phi|_2 + (k-1) |phi|_inf)
  double number_bound = 0.0;  // k |phi|_inf
  Eigen::Index dropped = 0;   // singular directions of the input Grams
};

NormEstimate measure_norms(const BosonicFock& fock, const GramStack& stack, const Element& phi,
                           int k);

std::vector<CheckRecord> check_norm_estimates(const BosonicFock& fock, const GramStack& stack,
                                              const Element& phi, int k, double tol = 1e-9);

/// Smallest eigenvalue of U_k^H G_k U_k over k <= N. Asserted for commutative
/// algebras; only reported otherwise.
CheckRecord check_positivity(const BosonicFock& fock, const GramStack& stack,
                             double tol = 1e-10);

/// Grade 1 and 2 Gram values of phi, phi (x) phi against 2 gamma0 mu(phi* psi)
/// and 2 gamma0^2 mu(phi* psi)^2 + 2 gamma0 mu((phi* psi)^2); relative error.
std::vector<CheckRecord> check_gram_closed_forms(const BosonicFock& fock, const Element& phi,
                                                 const Element& psi, double tol = 1e-10);

/// Random words of b*, b, n applied to the vacuum stay fixed under every
/// adjacent slot swap.
CheckRecord check_symmetry_preservation(const BosonicFock& fock, int words, std::mt19937_64& rng,
                                        double tol = 1e-12);

/// Largest deviation between the literal and fast Gram paths, relative.
double gram_path_deviation(const BosonicFock& fock, int k);

}  // namespace qwn
