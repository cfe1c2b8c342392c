#pragma once

#include <random>

#include "qwn/types.hpp"

namespace qwn {

struct GramNorm {
  double norm = 0.0;
  // Number of eigenvalues of the input Gram dropped below the cutoff.
  Eigen::Index dropped = 0;
};

/// Operator norm of T : (V_in, G_in) -> (V_out, G_out), i.e. the square root
/// of the largest eigenvalue of T^H G_out T v = lambda G_in v. A singular
/// G_in is handled by restricting to eigenvalues above cutoff * lambda_max.
GramNorm gram_operator_norm(const MatrixXc& T, const MatrixXc& gram_in,
                            const MatrixXc& gram_out, double cutoff = 1e-12);

/// Vector with independent standard Gaussian real and imaginary parts.
VectorXc random_vector(std::mt19937_64& rng, Eigen::Index n);

double min_hermitian_eigenvalue(const MatrixXc& h);

/// max |h - h^H|.
double hermiticity_defect(const MatrixXc& h);

/// B^H G B, the restriction of a form to the column span of B.
template <typename DerivedG, typename DerivedB>
MatrixXc compress(const Eigen::MatrixBase<DerivedG>& gram,
                  const Eigen::MatrixBase<DerivedB>& basis) {
  return basis.adjoint() * gram * basis;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace qwn
