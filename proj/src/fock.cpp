#include "qwn/fock.hpp"

#include "qwn/tensor.hpp"

namespace qwn {

int grade_shift(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::creation: return 1;
    case OperatorKind::annihilation: return -1;
    case OperatorKind::number: return 0;
  }
  return 0;
}

int GradedVector::top_grade() const {
  for (int k = cap(); k >= 0; --k) {
    if (grades_[static_cast<std::size_t>(k)].size() > 0 &&
        grades_[static_cast<std::size_t>(k)].cwiseAbs().maxCoeff() != 0.0) {
      return k;
    }
  }
  return -1;
}

GradedVector& GradedVector::operator+=(const GradedVector& other) {
  if (other.grades_.size() != grades_.size()) throw Error("graded vectors with different caps");
  for (std::size_t k = 0; k < grades_.size(); ++k) grades_[k] += other.grades_[k];
  return *this;
}

GradedVector& GradedVector::operator*=(cplx c) {
  for (auto& g : grades_) g *= c;
  return *this;
}

GradedVector GradedOperator::apply(const GradedVector& v) const {
  std::vector<VectorXc> out;
  for (int k = 0; k <= v.cap(); ++k) out.push_back(VectorXc::Zero(v.grade(k).size()));
  GradedVector result(std::move(out));
  for (int k = 0; k <= v.cap(); ++k) {
    const int target = k + shift;
    if (target < 0 || target > v.cap()) continue;
    const auto& b = blocks.at(static_cast<std::size_t>(k));
    if (b.size() == 0) continue;
    result.grade(target) += b * v.grade(k);
  }
  return result;
}

FockSpace::FockSpace(Algebra algebra, int truncation)
    : algebra_(std::move(algebra)), truncation_(truncation) {
  if (truncation < 1) throw Error("truncation must be at least 1");
  for (int k = 0; k <= truncation; ++k) {
    sizes_.push_back(checked_power(algebra_.dimension(), k, std::size_t{1} << 14));
  }
}

std::size_t FockSpace::grade_size(int k) const {
  check_grade(k);
  return sizes_[static_cast<std::size_t>(k)];
}

void FockSpace::check_grade(int k) const {
  if (k < 0 || k > truncation_) {
    throw Error("grade " + std::to_string(k) + " outside 0.." + std::to_string(truncation_));
  }
}

const MatrixXc& FockSpace::cached_block(OperatorKind kind, const Element& symbol, int source) const {
  constexpr std::size_t kMaxCachedBlocks = 4096;
  if (!symbol.value().allFinite()) throw Error("operator symbol has non-finite entries");
  std::vector<double> bits;
  bits.reserve(static_cast<std::size_t>(2 * symbol.value().size()));
  for (Eigen::Index i = 0; i < symbol.value().size(); ++i) {
    bits.push_back(symbol.value().data()[i].real());
    bits.push_back(symbol.value().data()[i].imag());
  }
  BlockKey key{static_cast<int>(kind), source, std::move(bits)};
  auto it = block_cache_.find(key);
  if (it != block_cache_.end()) return it->second;
  if (block_cache_.size() >= kMaxCachedBlocks) block_cache_.clear();
  return block_cache_.emplace(std::move(key), block(kind, symbol, source)).first->second;
}

GradedVector FockSpace::zero() const {
  std::vector<VectorXc> grades;
  for (int k = 0; k <= truncation_; ++k) {
    grades.push_back(VectorXc::Zero(static_cast<Eigen::Index>(sizes_[static_cast<std::size_t>(k)])));
  }
  return GradedVector(std::move(grades));
}

GradedVector FockSpace::vacuum() const {
  GradedVector v = zero();
  v.grade(0)(0) = 1.0;
  return v;
}

GradedOperator FockSpace::op(OperatorKind kind, const Element& symbol) const {
  GradedOperator o{kind, symbol, grade_shift(kind), {}};
  for (int k = 0; k <= truncation_; ++k) {
    const int target = k + o.shift;
    o.blocks.push_back(target < 0 || target > truncation_ ? MatrixXc() : block(kind, symbol, k));
  }
  return o;
}

GradedVector FockSpace::apply(OperatorKind kind, const Element& symbol,
                              const GradedVector& v) const {
  if (v.cap() != truncation_) throw Error("vector belongs to a different truncation");
  const int shift = grade_shift(kind);
  if (shift > 0 && v.top_grade() == truncation_) {
    throw Error("creation operator applied at the truncation grade");
  }
  GradedVector out = zero();
  for (int k = 0; k <= truncation_; ++k) {
    const int target = k + shift;
    if (target < 0 || target > truncation_) continue;
    if (v.grade(k).cwiseAbs().maxCoeff() == 0.0) continue;
    out.grade(target) += cached_block(kind, symbol, k) * v.grade(k);
  }
  return out;
}

GradedVector FockSpace::apply(const OperatorSum& sum, const GradedVector& v) const {
  GradedVector out = zero();
  for (const auto& [coef, letter] : sum) {
    if (coef == 0.0) continue;
    out += coef * apply(letter.kind, letter.symbol, v);
  }
  return out;
}

cplx FockSpace::vacuum_expectation(const std::vector<OperatorSum>& word) const {
  const int length = static_cast<int>(word.size());
  if (length > 2 * truncation_) {
    throw Error("word of length " + std::to_string(length) + " needs truncation >= " +
                std::to_string((length + 1) / 2));
  }
  GradedVector v = vacuum();
  for (int pos = length - 1; pos >= 0; --pos) {
    // `remaining` operators (this one included) must bring v back to grade 0.
    const int remaining = pos + 1;
    for (int k = 0; k <= truncation_; ++k) {
      if (k > remaining) v.grade(k).setZero();
    }
    GradedVector next = zero();
    for (const auto& [coef, letter] : word[static_cast<std::size_t>(pos)]) {
      if (coef == 0.0) continue;
      GradedVector source = v;
      if (grade_shift(letter.kind) > 0) {
        // A creation must leave grade <= remaining - 1.
        for (int k = 0; k <= truncation_; ++k)
          if (k + 1 > remaining - 1) source.grade(k).setZero();
      }
      next += coef * apply(letter.kind, letter.symbol, source);
    }
    v = std::move(next);
  }
  return v.grade(0)(0);
}

cplx FockSpace::vacuum_expectation(const std::vector<FockLetter>& word) const {
  std::vector<OperatorSum> sums;
  for (const auto& letter : word) sums.push_back({{1.0, letter}});
  return vacuum_expectation(sums);
}

cplx FockSpace::inner(const GradedVector& u, const GradedVector& v,
                      const std::vector<MatrixXc>& grams) {
  cplx total = 0.0;
  for (int k = 0; k <= std::min(u.cap(), v.cap()); ++k) {
    if (static_cast<std::size_t>(k) >= grams.size()) break;
    total += u.grade(k).dot(grams[static_cast<std::size_t>(k)] * v.grade(k));
  }
  return total;
}

}  // namespace qwn
