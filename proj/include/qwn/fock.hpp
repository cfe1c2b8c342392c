#pragma once

#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "qwn/algebra.hpp"
#include "qwn/types.hpp"

namespace qwn {

enum class OperatorKind { creation, annihilation, number };

int grade_shift(OperatorKind kind);

/// Per-grade coefficient vectors over the simple-tensor basis, grades 0..cap.
class GradedVector {
 public:
  GradedVector() = default;
  explicit GradedVector(std::vector<VectorXc> grades) : grades_(std::move(grades)) {}

  int cap() const { return static_cast<int>(grades_.size()) - 1; }
  const VectorXc& grade(int k) const { return grades_.at(static_cast<std::size_t>(k)); }
  VectorXc& grade(int k) { return grades_.at(static_cast<std::size_t>(k)); }
  /// Highest grade carrying a nonzero coefficient, -1 for the zero vector.
  int top_grade() const;

  GradedVector& operator+=(const GradedVector& other);
  GradedVector& operator*=(cplx c);
  friend GradedVector operator+(GradedVector a, const GradedVector& b) { return a += b; }
  friend GradedVector operator*(cplx c, GradedVector a) { return a *= c; }

 private:
  std::vector<VectorXc> grades_;
};

struct FockLetter {
  OperatorKind kind;
  Element symbol;
};

/// A linear combination of letters, e.g. Q_s(phi) = b*_phi + b_{phi*} + s n_phi.
using OperatorSum = std::vector<std::pair<cplx, FockLetter>>;

/// An operator of fixed kind and symbol as its per-grade blocks.
/// blocks[k] maps grade k to grade k + shift; absent blocks are empty.
struct GradedOperator {
  OperatorKind kind;
  Element symbol;
  int shift = 0;
  std::vector<MatrixXc> blocks;

  GradedVector apply(const GradedVector& v) const;
};

/// Shared machinery of the truncated Fock spaces: the concrete space decides
/// the Gram form and the block matrices of its creation, annihilation and
/// number operators on the full simple-tensor basis.
class FockSpace {
 public:
  FockSpace(Algebra algebra, int truncation);
  virtual ~FockSpace() = default;

  const Algebra& algebra() const { return algebra_; }
  int truncation() const { return truncation_; }
  std::size_t grade_size(int k) const;

  virtual MatrixXc gram(int k) const = 0;
  /// Block of the operator from grade `source` to source + shift.
  virtual MatrixXc block(OperatorKind kind, const Element& symbol, int source) const = 0;

  /// block() memoized on (kind, exact symbol values, source).
  const MatrixXc& cached_block(OperatorKind kind, const Element& symbol, int source) const;

  GradedVector zero() const;
  GradedVector vacuum() const;
  GradedOperator op(OperatorKind kind, const Element& symbol) const;
  /// Throws when a creation operator meets a nonzero top-grade component.
  GradedVector apply(OperatorKind kind, const Element& symbol, const GradedVector& v) const;
  GradedVector apply(const OperatorSum& sum, const GradedVector& v) const;

  /// <Omega, X_1 ... X_n Omega>; the word is applied right to left. Components
  /// that can no longer return to the vacuum are dropped, which is exact.
  /// Requires n <= 2 * truncation.
  cplx vacuum_expectation(const std::vector<OperatorSum>& word) const;
  cplx vacuum_expectation(const std::vector<FockLetter>& word) const;

  /// <u, v> with respect to the supplied per-grade Gram matrices.
  static cplx inner(const GradedVector& u, const GradedVector& v,
                    const std::vector<MatrixXc>& grams);

 protected:
  void check_grade(int k) const;

 private:
  Algebra algebra_;
  int truncation_;
  std::vector<std::size_t> sizes_;
  using BlockKey = std::tuple<int, int, std::vector<double>>;
  mutable std::map<BlockKey, MatrixXc> block_cache_;
};

}  // namespace qwn
