#include "qwn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qwn {

std::size_t checked_power(std::size_t base, int grade, std::size_t cap) {
  std::size_t size = 1;
  for (int r = 0; r < grade; ++r) {
    if (base != 0 && size > cap / base) throw Error("tensor space exceeds size cap");
    size *= base;
  }
  if (size > cap) throw Error("tensor space exceeds size cap");
  return size;
}

TensorBasis::TensorBasis(std::size_t base, int grade)
    : base_(base), grade_(grade), size_(checked_power(base, grade, std::size_t{1} << 24)) {
  if (grade < 0) throw Error("negative grade");
}

std::size_t TensorBasis::index(const std::vector<int>& multi) const {
  std::size_t flat = 0;
  for (int i : multi) flat = flat * base_ + static_cast<std::size_t>(i);
  return flat;
}

std::vector<int> TensorBasis::multi_index(std::size_t flat) const {
  std::vector<int> multi(static_cast<std::size_t>(grade_));
  for (int r = grade_ - 1; r >= 0; --r) {
    multi[static_cast<std::size_t>(r)] = static_cast<int>(flat % base_);
    flat /= base_;
  }
  return multi;
}

MatrixXc symmetric_basis(std::size_t base, int grade) {
  const TensorBasis basis(base, grade);
  std::map<std::vector<int>, std::vector<std::size_t>> orbits;
  for (std::size_t flat = 0; flat < basis.size(); ++flat) {
    auto multi = basis.multi_index(flat);
    std::sort(multi.begin(), multi.end());
    orbits[multi].push_back(flat);
  }
  MatrixXc u = MatrixXc::Zero(static_cast<Eigen::Index>(basis.size()),
                              static_cast<Eigen::Index>(orbits.size()));
  Eigen::Index col = 0;
  for (const auto& [key, members] : orbits) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (std::size_t flat : members) u(static_cast<Eigen::Index>(flat), col) = scale;
    ++col;
  }
  return u;
}

MatrixXc slot_permutation(std::size_t base, int grade, const std::vector<int>& perm) {
  const TensorBasis basis(base, grade);
  const auto n = static_cast<Eigen::Index>(basis.size());
  MatrixXc p = MatrixXc::Zero(n, n);
  for (std::size_t flat = 0; flat < basis.size(); ++flat) {
    const auto multi = basis.multi_index(flat);
    std::vector<int> moved(multi.size());
    for (std::size_t r = 0; r < multi.size(); ++r) moved[r] = multi[static_cast<std::size_t>(perm[r])];
    p(static_cast<Eigen::Index>(basis.index(moved)), static_cast<Eigen::Index>(flat)) = 1.0;
  }
  return p;
}

}  // namespace qwn
