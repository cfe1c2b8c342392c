#include "qwn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qwn {

GramNorm gram_operator_norm(const MatrixXc& T, const MatrixXc& gram_in,
                            const MatrixXc& gram_out, double cutoff) {
  GramNorm out;
  if (T.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<MatrixXc> in_solver(gram_in);
  const auto& lambda = in_solver.eigenvalues();
  const double top = std::max(lambda.maxCoeff(), 0.0);
  if (top <= 0.0) {
    out.dropped = lambda.size();
    return out;
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > cutoff * top) {
      kept.push_back(i);
    } else {
      ++out.dropped;
    }
  }
  // W maps orthonormal coordinates of the G_in geometry back to V_in.
  MatrixXc W(gram_in.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) {
    W.col(static_cast<Eigen::Index>(j)) =
        in_solver.eigenvectors().col(kept[j]) / std::sqrt(lambda[kept[j]]);
  }
  MatrixXc TW = T * W;
  MatrixXc m = TW.adjoint() * gram_out * TW;
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(m, Eigen::EigenvaluesOnly);
  out.norm = std::sqrt(std::max(solver.eigenvalues().maxCoeff(), 0.0));
  return out;
}

double min_hermitian_eigenvalue(const MatrixXc& h) {
  if (h.size() == 0) return 0.0;
  MatrixXc sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double hermiticity_defect(const MatrixXc& h) { return max_abs(h - h.adjoint()); }

VectorXc random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  VectorXc v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = g(rng);
    v(i) = cplx(re, g(rng));
  }
  return v;
}

}  // namespace qwn
