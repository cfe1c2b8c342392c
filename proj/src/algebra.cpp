#include "qwn/algebra.hpp"

#include <cmath>
#include <numeric>

#include "qwn/linalg.hpp"

namespace qwn {

PointMeasureSpace::PointMeasureSpace(std::vector<double> weights,
                                     std::vector<std::string> labels)
    : weights_(std::move(weights)), labels_(std::move(labels)) {
  if (weights_.empty()) throw Error("point measure space needs at least one point");
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error("point weights must be finite and positive");
  }
  if (labels_.empty()) {
    for (std::size_t i = 0; i < weights_.size(); ++i) labels_.push_back("x" + std::to_string(i));
  }
  if (labels_.size() != weights_.size()) throw Error("one label per point required");
  total_mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

PointMeasureSpace PointMeasureSpace::uniform(std::size_t n, double weight) {
  return PointMeasureSpace(std::vector<double>(n, weight));
}

Element& Element::operator+=(const Element& other) {
  if (kind_ != other.kind_ || value_.rows() != other.value_.rows() ||
      value_.cols() != other.value_.cols()) {
    throw Error("adding elements of different algebras");
  }
  value_ += other.value_;
  return *this;
}

Element& Element::operator-=(const Element& other) { return *this += (-1.0) * other; }

Element& Element::operator*=(cplx factor) {
  value_ *= factor;
  return *this;
}

Element operator*(const Element& x, const Element& y) {
  if (x.kind() != y.kind() || x.value().rows() != y.value().rows() ||
      x.value().cols() != y.value().cols()) {
    throw Error("multiplying elements of different algebras");
  }
  if (x.kind() == AlgebraKind::functions) {
    return Element(x.kind(), x.value().cwiseProduct(y.value()));
  }
  return Element(x.kind(), x.value() * y.value());
}

Element star(const Element& x) {
  if (x.kind() == AlgebraKind::functions) return Element(x.kind(), x.value().conjugate());
  return Element(x.kind(), x.value().adjoint());
}

Algebra Algebra::functions(PointMeasureSpace space) {
  Algebra a;
  a.kind_ = AlgebraKind::functions;
  a.order_ = space.size();
  a.space_ = std::move(space);
  return a;
}

Algebra Algebra::matrices(std::size_t m) {
  if (m == 0) throw Error("matrix algebra needs m >= 1");
  Algebra a;
  a.kind_ = AlgebraKind::matrices;
  a.order_ = m;
  return a;
}

std::size_t Algebra::dimension() const {
  return kind_ == AlgebraKind::functions ? order_ : order_ * order_;
}

void Algebra::check(const Element& x) const {
  const auto n = static_cast<Eigen::Index>(order_);
  const bool ok = kind_ == AlgebraKind::functions
                      ? (x.kind() == kind_ && x.value().rows() == n && x.value().cols() == 1)
                      : (x.kind() == kind_ && x.value().rows() == n && x.value().cols() == n);
  if (!ok) throw Error("element does not belong to this algebra");
}

Element Algebra::zero() const {
  const auto n = static_cast<Eigen::Index>(order_);
  if (kind_ == AlgebraKind::functions) return Element(kind_, MatrixXc::Zero(n, 1));
  return Element(kind_, MatrixXc::Zero(n, n));
}

Element Algebra::unit() const {
  const auto n = static_cast<Eigen::Index>(order_);
  if (kind_ == AlgebraKind::functions) return Element(kind_, MatrixXc::Ones(n, 1));
  return Element(kind_, MatrixXc::Identity(n, n));
}

Element Algebra::basis(std::size_t i) const {
  if (i >= dimension()) throw Error("basis index out of range");
  Element e = zero();
  MatrixXc v = e.value();
  if (kind_ == AlgebraKind::functions) {
    v(static_cast<Eigen::Index>(i), 0) = 1.0;
  } else {
    v(static_cast<Eigen::Index>(i / order_), static_cast<Eigen::Index>(i % order_)) = 1.0;
  }
  return Element(kind_, std::move(v));
}

Element Algebra::from_values(const VectorXc& values) const {
  if (kind_ != AlgebraKind::functions) throw Error("from_values needs a function algebra");
  if (values.size() != static_cast<Eigen::Index>(order_)) throw Error("dimension mismatch");
  return Element(kind_, values);
}

Element Algebra::from_matrix(const MatrixXc& m) const {
  if (kind_ != AlgebraKind::matrices) throw Error("from_matrix needs a matrix algebra");
  const auto n = static_cast<Eigen::Index>(order_);
  if (m.rows() != n || m.cols() != n) throw Error("dimension mismatch");
  return Element(kind_, m);
}

VectorXc Algebra::coordinates(const Element& x) const {
  check(x);
  if (kind_ == AlgebraKind::functions) return x.value().col(0);
  // Row-major flattening matches basis(i) = E_{i/m, i%m}.
  const auto n = static_cast<Eigen::Index>(order_);
  VectorXc c(n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) c(a * n + b) = x.value()(a, b);
  return c;
}

Element Algebra::from_coordinates(const VectorXc& c) const {
  if (c.size() != static_cast<Eigen::Index>(dimension())) throw Error("dimension mismatch");
  if (kind_ == AlgebraKind::functions) return Element(kind_, c);
  const auto n = static_cast<Eigen::Index>(order_);
  MatrixXc m(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) m(a, b) = c(a * n + b);
  return Element(kind_, std::move(m));
}

Element Algebra::random(std::mt19937_64& rng, bool real) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXc c(static_cast<Eigen::Index>(dimension()));
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double re = normal(rng);
    const double im = real ? 0.0 : normal(rng);
    c(i) = cplx(re, im);
  }
  Element x = from_coordinates(c);
  // A real function is self-adjoint; for matrices "real" means Hermitian.
  if (real && kind_ == AlgebraKind::matrices) x = 0.5 * (x + star(x));
  return x;
}

cplx Algebra::state(const Element& x) const {
  check(x);
  if (kind_ == AlgebraKind::functions) {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < order_; ++i) {
      sum += space_.weight(i) * x.value()(static_cast<Eigen::Index>(i), 0);
    }
    return sum;
  }
  return x.value().trace() / static_cast<double>(order_);
}

cplx Algebra::state_of_product(const std::vector<Element>& factors) const {
  if (factors.empty()) return state(unit());
  Element p = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) p = p * factors[i];
  return state(p);
}

cplx Algebra::inner(const Element& x, const Element& y) const { return state(star(x) * y); }

double Algebra::l2_norm(const Element& x) const {
  return std::sqrt(std::max(inner(x, x).real(), 0.0));
}

MatrixXc Algebra::gns_gram() const {
  const auto n = static_cast<Eigen::Index>(dimension());
  MatrixXc g(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      g(a, b) = inner(basis(static_cast<std::size_t>(a)), basis(static_cast<std::size_t>(b)));
  return g;
}

MatrixXc Algebra::left_multiplication(const Element& x) const {
  check(x);
  const auto n = static_cast<Eigen::Index>(dimension());
  MatrixXc m(n, n);
  for (Eigen::Index b = 0; b < n; ++b) m.col(b) = coordinates(x * basis(static_cast<std::size_t>(b)));
  return m;
}

double Algebra::l_inf_norm(const Element& x) const {
  const MatrixXc g = gns_gram();
  return gram_operator_norm(left_multiplication(x), g, g).norm;
}

double Algebra::l_inf_norm_literal(const Element& x) const {
  check(x);
  const auto n = static_cast<Eigen::Index>(dimension());
  // y -> mu(xy) is the linear functional f^T c on coordinates c of y.
  VectorXc f(n);
  for (Eigen::Index b = 0; b < n; ++b) f(b) = state(x * basis(static_cast<std::size_t>(b)));
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(gns_gram());
  // sup |f^T c| subject to c^H G c = 1 equals || G^{-1/2} conj(f) ||.
  VectorXc u = solver.eigenvectors().adjoint() * f.conjugate();
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) s += std::norm(u(i)) / solver.eigenvalues()(i);
  return std::sqrt(s);
}

}  // namespace qwn
