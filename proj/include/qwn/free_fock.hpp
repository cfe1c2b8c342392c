#pragma once

#include <random>
#include <vector>

#include "qwn/fock.hpp"
#include "qwn/report.hpp"

namespace qwn {

struct FreeParams {
  double gamma = 1.0;
  int truncation = 3;
  Algebra algebra;
};

/// The free quadratic Fock space: full tensor powers with the form summed
/// over interval (Boolean) compositions, b* prepending, b contracting the
/// first slot and n acting on the first slot only.
class FreeFock : public FockSpace {
 public:
  explicit FreeFock(FreeParams params);

  const FreeParams& params() const { return params_; }
  double gamma() const { return params_.gamma; }

  MatrixXc gram(int k) const override;
  MatrixXc block(OperatorKind kind, const Element& symbol, int source) const override;

  /// Q_s(phi) = b*_phi + b_{phi*} + s n_phi.
  OperatorSum field(double s, const Element& phi) const;

 private:
  FreeParams params_;
};

/// tau[Q_s(phi_1) ... Q_s(phi_k)] on the truncated space.
cplx free_moment_operator(const FreeFock& fock, double s, const std::vector<Element>& phis);
/// Sum over noncrossing partitions of prod_blocks gamma mu(phi's of the block,
/// increasing index order) cumulant_weight(|block|, s).
cplx free_moment_formula(const Algebra& algebra, double gamma, double s,
                         const std::vector<Element>& phis);
/// gamma mu(phi_1 ... phi_n) cumulant_weight(n, s).
cplx free_cumulant_closed_form(const Algebra& algebra, double gamma, double s,
                               const std::vector<Element>& phis);

/// (free1)-(free3) as block identities on every grade where both sides exist.
std::vector<CheckRecord> check_free_relations(const FreeFock& fock, const Element& phi,
                                              const Element& psi, const Element& zeta,
                                              const Element& eta, double tol = 1e-12);
std::vector<CheckRecord> check_free_adjointness(const FreeFock& fock, const std::vector<MatrixXc>& grams,
                                                const Element& zeta, double tol = 1e-10);
CheckRecord check_free_positivity(const FreeFock& fock, const std::vector<MatrixXc>& grams,
                                  double tol = 1e-10);
std::vector<CheckRecord> check_free_norms(const FreeFock& fock, const std::vector<MatrixXc>& grams,
                                          const Element& phi, double tol = 1e-9);
/// Operator moments against the noncrossing formula, and free cumulants
/// against the closed form, for random words of length 1..max_length.
std::vector<CheckRecord> check_free_moments(const FreeFock& fock, double s, int max_length,
                                            int trials, std::mt19937_64& rng, double tol = 1e-9);
/// |rho(XY) - rho(YX)| for random products X, Y of at most `factors` fields.
CheckRecord check_traciality(const FreeFock& fock, double s, int factors, int trials,
                             std::mt19937_64& rng, double tol = 1e-9);
/// Alternating products of centered degree <= 2 polynomials in fields with
/// disjoint point supports; total degree <= order. Needs a function algebra
/// with at least two points.
CheckRecord check_freeness(const FreeFock& fock, double s, int order, int trials,
                           std::mt19937_64& rng, double tol = 1e-9);

}  // namespace qwn
