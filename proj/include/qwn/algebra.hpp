#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "qwn/types.hpp"

namespace qwn {

/// A finite set of atoms with strictly positive masses.
class PointMeasureSpace {
 public:
  PointMeasureSpace() = default;
  explicit PointMeasureSpace(std::vector<double> weights,
                             std::vector<std::string> labels = {});

  static PointMeasureSpace uniform(std::size_t n, double weight = 1.0);

  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::string>& labels() const { return labels_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double total_mass() const { return total_mass_; }

 private:
  std::vector<double> weights_;
  std::vector<std::string> labels_;
  double total_mass_ = 0.0;
};

enum class AlgebraKind { functions, matrices };

/// An element of a finite *-algebra. Function-algebra elements store their
/// values per point as an n x 1 column; matrix-algebra elements store the
/// m x m matrix itself.
class Element {
 public:
  Element() = default;
  Element(AlgebraKind kind, MatrixXc value) : kind_(kind), value_(std::move(value)) {}

  AlgebraKind kind() const { return kind_; }
  const MatrixXc& value() const { return value_; }

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(cplx factor);

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(cplx c, Element a) { return a *= c; }
  friend Element operator*(Element a, cplx c) { return a *= c; }

  bool operator==(const Element& other) const {
    return kind_ == other.kind_ && value_ == other.value_;
  }

 private:
  AlgebraKind kind_ = AlgebraKind::functions;
  MatrixXc value_;
};

/// Algebra product: pointwise for functions, matrix product for matrices.
Element operator*(const Element& x, const Element& y);
/// Involution: complex conjugation for functions, adjoint for matrices.
Element star(const Element& x);

/// A finite *-algebra with a state: either C(M) with the weighted-sum state
/// of a PointMeasureSpace, or M_m(C) with the normalized trace.
class Algebra {
 public:
  static Algebra functions(PointMeasureSpace space);
  static Algebra matrices(std::size_t m);

  AlgebraKind kind() const { return kind_; }
  bool is_commutative() const { return kind_ == AlgebraKind::functions; }
  // Both supported states are tracial.
  bool is_tracial() const { return true; }

  /// Number of points, or matrix size m.
  std::size_t order() const { return order_; }
  /// Dimension of the algebra as a vector space: n, or m*m.
  std::size_t dimension() const;
  const PointMeasureSpace& space() const { return space_; }

  /// Delta function at point i, or matrix unit E_ab with i = a*m + b.
  Element basis(std::size_t i) const;
  Element unit() const;
  Element zero() const;
  Element from_values(const VectorXc& values) const;
  Element from_matrix(const MatrixXc& m) const;
  /// Coordinates with respect to basis().
  VectorXc coordinates(const Element& x) const;
  Element from_coordinates(const VectorXc& c) const;

  /// Gaussian random element with independent real and imaginary parts.
  Element random(std::mt19937_64& rng, bool real = false) const;

  cplx state(const Element& x) const;
  /// State of the ordered product x_1 x_2 ... x_n.
  cplx state_of_product(const std::vector<Element>& factors) const;
  /// mu(x^* y).
  cplx inner(const Element& x, const Element& y) const;

  double l2_norm(const Element& x) const;
  /// Norm of left multiplication by x on the GNS space <y,z> = mu(y^* z).
  double l_inf_norm(const Element& x) const;
  /// sup |mu(xy)| over y with unit L2 norm. Kept for comparison only.
  double l_inf_norm_literal(const Element& x) const;

  /// Gram matrix mu(e_a^* e_b) of the basis.
  MatrixXc gns_gram() const;
  /// Matrix of y -> x y in basis coordinates.
  MatrixXc left_multiplication(const Element& x) const;

  void check(const Element& x) const;

 private:
  AlgebraKind kind_ = AlgebraKind::functions;
  std::size_t order_ = 0;
  PointMeasureSpace space_;
};

}  // namespace qwn
