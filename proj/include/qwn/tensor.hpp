#pragma once

#include <cstddef>
#include <vector>

#include "qwn/types.hpp"

namespace qwn {

/// Simple-tensor basis of V^{(x)k} for dim V = base. A multi-index
/// (i_1, ..., i_k) maps to sum_r i_r base^{k-r}: the first slot is most
/// significant.
class TensorBasis {
 public:
  TensorBasis(std::size_t base, int grade);

  std::size_t base() const { return base_; }
  int grade() const { return grade_; }
  std::size_t size() const { return size_; }

  std::size_t index(const std::vector<int>& multi) const;
  std::vector<int> multi_index(std::size_t flat) const;

 private:
  std::size_t base_;
  int grade_;
  std::size_t size_;
};

std::size_t checked_power(std::size_t base, int grade, std::size_t cap);

/// Orthonormal (Euclidean) basis of the permutation-invariant subspace:
/// one column per multiset of indices, the normalized orbit sum.
MatrixXc symmetric_basis(std::size_t base, int grade);

/// Matrix of the slot permutation v_1 (x) ... (x) v_k -> v_{perm(1)} (x) ...
MatrixXc slot_permutation(std::size_t base, int grade, const std::vector<int>& perm);

}  // namespace qwn
