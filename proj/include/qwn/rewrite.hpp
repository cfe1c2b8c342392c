#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qwn/algebra.hpp"
#include "qwn/report.hpp"

namespace qwn {

/// Product of generators and their conjugates in a commutative algebra, as a
/// sorted list of atoms 2 g + (starred ? 1 : 0). The empty monomial is 1.
using Monomial = std::vector<int>;

Monomial multiply(const Monomial& a, const Monomial& b);
Monomial conjugate(const Monomial& a);

/// Named generators over a commutative backing algebra.
class SymbolTable {
 public:
  explicit SymbolTable(Algebra algebra);

  const Algebra& algebra() const { return algebra_; }
  Monomial add(std::string name, const Element& value);
  Monomial get(const std::string& name) const;
  bool contains(const std::string& name) const;
  std::size_t size() const { return values_.size(); }

  Element evaluate(const Monomial& m) const;
  /// mu of the evaluated monomial, cached.
  cplx state(const Monomial& m) const;
  /// <x, y> = mu(x* y).
  cplx inner(const Monomial& x, const Monomial& y) const { return state(multiply(conjugate(x), y)); }
  std::string describe(const Monomial& m) const;

 private:
  Algebra algebra_;
  std::vector<std::string> names_;
  std::vector<Element> values_;
  mutable std::map<Monomial, cplx> state_cache_;
};

enum class LetterKind { b_star, a_star, n, b, a };

std::string to_string(LetterKind kind);
LetterKind letter_kind_from_string(const std::string& s);
/// 0 for creators, 1 for number operators, 2 for annihilators.
int rank(LetterKind kind);

struct Letter {
  LetterKind kind;
  Monomial symbol;
  auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>;

/// Linear combination of words with exact merging of identical words.
class Expression {
 public:
  Expression() = default;
  static Expression scalar(cplx c);
  static Expression letter(LetterKind kind, const Monomial& symbol);
  /// Q_s(phi) = b*_phi + b_{phi*} + s n_phi.
  static Expression field(double s, const Monomial& phi);

  const std::map<Word, cplx>& terms() const { return terms_; }
  void add(const Word& w, cplx c);
  Expression& operator+=(const Expression& other);
  Expression& operator*=(cplx c);
  friend Expression operator+(Expression a, const Expression& b) { return a += b; }
  friend Expression operator-(Expression a, const Expression& b) { return a += (-1.0 * b); }
  friend Expression operator*(cplx c, Expression a) { return a *= c; }
  friend Expression operator*(const Expression& a, const Expression& b);
  Expression power(int m) const;
  Expression adjoint() const;
  std::size_t max_length() const;
  /// Coefficient of the empty word.
  cplx scalar_part() const;
  /// Largest |coefficient|, 0 for the empty expression.
  double max_coefficient() const;

 private:
  std::map<Word, cplx> terms_;
};

/// Coefficients of the relations used for normal ordering:
///   b_phi b*_psi -> b*_psi b_phi + c1 gamma0 <phi,psi> + c2 n_{phi* psi}
///   n_phi b*_psi -> b*_psi n_phi + kappa b*_{phi psi}
///   b_psi n_phi  -> n_phi b_psi + kappa b_{phi* psi}
///   a_phi a*_psi -> a*_psi a_phi + <phi,psi>
///   a_phi b*_psi -> b*_psi a_phi + mixed_ab a*_{phi* psi}
///   b_phi a*_psi -> a*_psi b_phi + mixed_ba a_{phi psi*}
/// Letters of equal rank commute.
struct RelationTable {
  double gamma0 = 1.0;
  double c1 = 2.0;
  double c2 = 4.0;
  double kappa = 2.0;
  double mixed_ab = 2.0;
  double mixed_ba = 2.0;

  /// The coefficients realized by the bosonic Fock matrices, with kappa as measured.
  static RelationTable fock(double gamma0, double measured_kappa);
};

inline constexpr std::size_t kMaxWordLength = 14;

enum class Strategy { leftmost, random };

struct RewriteOptions {
  Strategy strategy = Strategy::leftmost;
  std::uint64_t seed = 0;
  // Drop terms that cannot contribute to the vacuum expectation.
  bool vacuum_only = false;
};

struct RewriteResult {
  Expression form;
  std::uint64_t steps = 0;
  // sum over input words of 4^length
  double step_bound = 0.0;
};

class Rewriter {
 public:
  Rewriter(SymbolTable symbols, RelationTable table);

  const SymbolTable& symbols() const { return symbols_; }
  const RelationTable& table() const { return table_; }

  RewriteResult normal_order(const Expression& e, const RewriteOptions& options = {}) const;
  /// Scalar term of the normal form.
  cplx vacuum_moment(const Expression& e) const;

 private:
  SymbolTable symbols_;
  RelationTable table_;
};

bool is_normal(const Word& w);
/// Largest coefficient difference between two expressions, word by word.
double max_difference(const Expression& a, const Expression& b);
Json to_json(const Expression& e, const SymbolTable& symbols);

// Checks over a function algebra.

std::vector<CheckRecord> check_commuting_family(const Rewriter& rw, double s, const Monomial& phi,
                                                const Monomial& psi, double tol = 1e-12);
CheckRecord check_factorization(const Rewriter& rw, double s, const Monomial& phi1, const Monomial& phi2,
                                int p, int q, double tol = 1e-10);
/// Moments of X = l Q_2(chi) + t against the gamma law; chi is the indicator
/// of a set of mass t. Also reports the literal gamma0 Q_2 + t scaling.
std::vector<CheckRecord> gamma_moment_check(double gamma0, double t, int m_max, RelationTable table,
                                            double tol = 1e-9);
/// theta^m alpha (alpha + 1) ... (alpha + m - 1).
double gamma_raw_moment(double alpha, double theta, int m);

struct NogoCertificate {
  double closed_form = 0.0;
  cplx symbolic = 0.0;
  double minimizer = 0.0;
  double min_value = 0.0;
};
NogoCertificate nogo_certificate(double gamma0, double l, double c, const RelationTable& table = {});
std::vector<CheckRecord> check_nogo(double gamma0, double l, double tol = 1e-12);

/// Termination within 4^length steps and agreement of randomized strategies.
std::vector<CheckRecord> check_rewriting(const Rewriter& rw, const std::vector<Monomial>& pool, int words,
                                         int max_length, int strategies, std::mt19937_64& rng,
                                         double tol = 1e-12);

/// Vacuum moments of the engine with the coefficients measured on the bosonic
/// Fock matrices against those matrices, for random words of b*, b, n.
std::vector<CheckRecord> check_engine_against_fock(const Algebra& algebra, double gamma0, int truncation,
                                                   int words, int max_length, std::mt19937_64& rng,
                                                   double tol = 1e-9);

}  // namespace qwn
