#include "qwn/rewrite.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "qwn/bosonic_fock.hpp"
#include "qwn/combinatorics.hpp"

namespace qwn {

namespace {

constexpr const char* kNormalLocation = "quadratic white noise relations: normal form";
constexpr const char* kCommutingLocation = "classical processes: commuting family of normal operators";
constexpr const char* kIndependenceLocation = "classical processes: independent increments";
constexpr const char* kGammaLocation = "classical processes: gamma and chi-square distributions";
constexpr const char* kNogoLocation = "quadratic and linear white noise: no Fock representation";
constexpr const char* kFockLocation = "bosonic quadratic Fock space: representation of the relations";

double scaled(double diff, double scale) { return diff / std::max(1.0, scale); }

Letter make(LetterKind kind, Monomial symbol) { return Letter{kind, std::move(symbol)}; }

}  // namespace

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Monomial conjugate(const Monomial& a) {
  Monomial out(a);
  for (int& atom : out) atom ^= 1;
  std::sort(out.begin(), out.end());
  return out;
}

SymbolTable::SymbolTable(Algebra algebra) : algebra_(std::move(algebra)) {
  if (!algebra_.is_commutative()) throw Error("symbolic rewriting needs a commutative algebra");
}

Monomial SymbolTable::add(std::string name, const Element& value) {
  algebra_.check(value);
  if (contains(name)) throw Error("duplicate symbol " + name);
  names_.push_back(std::move(name));
  values_.push_back(value);
  state_cache_.clear();
  return {2 * static_cast<int>(values_.size() - 1)};
}

bool SymbolTable::contains(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

Monomial SymbolTable::get(const std::string& name) const {
  if (name == "1") return {};
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error("unknown symbol " + name);
  return {2 * static_cast<int>(it - names_.begin())};
}

Element SymbolTable::evaluate(const Monomial& m) const {
  Element out = algebra_.unit();
  for (int atom : m) {
    const Element& v = values_.at(static_cast<std::size_t>(atom / 2));
    out = out * ((atom & 1) ? star(v) : v);
  }
  return out;
}

cplx SymbolTable::state(const Monomial& m) const {
  const auto it = state_cache_.find(m);
  if (it != state_cache_.end()) return it->second;
  const cplx v = algebra_.state(evaluate(m));
  state_cache_.emplace(m, v);
  return v;
}

std::string SymbolTable::describe(const Monomial& m) const {
  if (m.empty()) return "1";
  std::string out;
  for (int atom : m) {
    if (!out.empty()) out += "*";
    const std::string& name = names_.at(static_cast<std::size_t>(atom / 2));
    out += (atom & 1) ? "conj(" + name + ")" : name;
  }
  return out;
}

std::string to_string(LetterKind kind) {
  switch (kind) {
    case LetterKind::b_star: return "b*";
    case LetterKind::a_star: return "a*";
    case LetterKind::n: return "n";
    case LetterKind::b: return "b";
    case LetterKind::a: return "a";
  }
  return "?";
}

LetterKind letter_kind_from_string(const std::string& s) {
  for (auto k : {LetterKind::b_star, LetterKind::a_star, LetterKind::n, LetterKind::b, LetterKind::a}) {
    if (s == to_string(k)) return k;
  }
  if (s == "bstar" || s == "b_star") return LetterKind::b_star;
  if (s == "astar" || s == "a_star") return LetterKind::a_star;
  throw Error("unknown letter kind " + s);
}

int rank(LetterKind kind) {
  switch (kind) {
    case LetterKind::b_star:
    case LetterKind::a_star: return 0;
    case LetterKind::n: return 1;
    case LetterKind::b:
    case LetterKind::a: return 2;
  }
  return 0;
}

Expression Expression::scalar(cplx c) {
  Expression e;
  e.add({}, c);
  return e;
}

Expression Expression::letter(LetterKind kind, const Monomial& symbol) {
  Expression e;
  e.add({make(kind, symbol)}, 1.0);
  return e;
}

Expression Expression::field(double s, const Monomial& phi) {
  Expression e = letter(LetterKind::b_star, phi) + letter(LetterKind::b, conjugate(phi));
  if (s != 0.0) e += s * letter(LetterKind::n, phi);
  return e;
}

void Expression::add(const Word& w, cplx c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Expression& Expression::operator+=(const Expression& other) {
  for (const auto& [w, c] : other.terms_) add(w, c);
  return *this;
}

Expression& Expression::operator*=(cplx c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, coef] : terms_) coef *= c;
  return *this;
}

Expression operator*(const Expression& a, const Expression& b) {
  Expression out;
  for (const auto& [wa, ca] : a.terms_) {
    for (const auto& [wb, cb] : b.terms_) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add(w, ca * cb);
    }
  }
  return out;
}

Expression Expression::power(int m) const {
  Expression out = scalar(1.0);
  for (int i = 0; i < m; ++i) out = out * *this;
  return out;
}

Expression Expression::adjoint() const {
  Expression out;
  for (const auto& [w, c] : terms_) {
    Word r;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      LetterKind k = it->kind;
      switch (k) {
        case LetterKind::b_star: k = LetterKind::b; break;
        case LetterKind::b: k = LetterKind::b_star; break;
        case LetterKind::a_star: k = LetterKind::a; break;
        case LetterKind::a: k = LetterKind::a_star; break;
        case LetterKind::n: break;
      }
      // b*_f and b_f are mutually adjoint; n_f has adjoint n_{f*}.
      r.push_back(make(k, k == LetterKind::n ? conjugate(it->symbol) : it->symbol));
    }
    out.add(r, std::conj(c));
  }
  return out;
}

std::size_t Expression::max_length() const {
  std::size_t m = 0;
  for (const auto& [w, c] : terms_) m = std::max(m, w.size());
  return m;
}

cplx Expression::scalar_part() const {
  const auto it = terms_.find(Word{});
  return it == terms_.end() ? cplx(0.0) : it->second;
}

double Expression::max_coefficient() const {
  double m = 0.0;
  for (const auto& [w, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

RelationTable RelationTable::fock(double gamma0, double measured_kappa) {
  RelationTable t;
  t.gamma0 = gamma0;
  t.kappa = measured_kappa;
  return t;
}

bool is_normal(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i + 1] < w[i]) return false;
  }
  return true;
}

Rewriter::Rewriter(SymbolTable symbols, RelationTable table)
    : symbols_(std::move(symbols)), table_(table) {
  if (!(table_.gamma0 > 0.0)) throw Error("gamma0 must be positive");
}

RewriteResult Rewriter::normal_order(const Expression& e, const RewriteOptions& options) const {
  using K = LetterKind;
  RewriteResult result;
  std::map<Word, cplx> pending;
  for (const auto& [w, c] : e.terms()) {
    if (w.size() > kMaxWordLength) throw Error("word longer than " + std::to_string(kMaxWordLength));
    result.step_bound += std::pow(4.0, static_cast<double>(w.size()));
    pending[w] += c;
  }
  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> positions;
  while (!pending.empty()) {
    auto it = pending.begin();
    if (options.strategy == Strategy::random && pending.size() > 1) {
      std::advance(it, std::uniform_int_distribution<std::size_t>(0, pending.size() - 1)(rng));
    }
    const Word w = it->first;
    const cplx coef = it->second;
    pending.erase(it);
    if (coef == 0.0) continue;
    if (options.vacuum_only && !w.empty() && (rank(w.back().kind) >= 1 || rank(w.front().kind) == 0)) {
      continue;
    }
    positions.clear();
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i + 1] < w[i]) positions.push_back(i);
    }
    if (positions.empty()) {
      result.form.add(w, coef);
      continue;
    }
    ++result.steps;
    std::size_t i = positions.front();
    if (options.strategy == Strategy::random) {
      i = positions[std::uniform_int_distribution<std::size_t>(0, positions.size() - 1)(rng)];
    }
    const Letter& x = w[i];
    const Letter& y = w[i + 1];
    auto emit = [&](cplx c, std::initializer_list<Letter> middle) {
      if (c == 0.0) return;
      Word out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
      out.insert(out.end(), middle.begin(), middle.end());
      out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(i + 2), w.end());
      pending[out] += coef * c;
    };
    emit(1.0, {y, x});
    if (rank(x.kind) == rank(y.kind)) continue;
    const RelationTable& t = table_;
    if (x.kind == K::b && y.kind == K::b_star) {
      emit(t.c1 * t.gamma0 * symbols_.inner(x.symbol, y.symbol), {});
      emit(t.c2, {make(K::n, multiply(conjugate(x.symbol), y.symbol))});
    } else if (x.kind == K::n && y.kind == K::b_star) {
      emit(t.kappa, {make(K::b_star, multiply(x.symbol, y.symbol))});
    } else if (x.kind == K::b && y.kind == K::n) {
      emit(t.kappa, {make(K::b, multiply(conjugate(y.symbol), x.symbol))});
    } else if (x.kind == K::a && y.kind == K::a_star) {
      emit(symbols_.inner(x.symbol, y.symbol), {});
    } else if (x.kind == K::a && y.kind == K::b_star) {
      emit(t.mixed_ab, {make(K::a_star, multiply(conjugate(x.symbol), y.symbol))});
    } else if (x.kind == K::b && y.kind == K::a_star) {
      emit(t.mixed_ba, {make(K::a, multiply(x.symbol, conjugate(y.symbol)))});
    } else {
      throw Error("no relation for the pair " + to_string(x.kind) + " " + to_string(y.kind));
    }
  }
  return result;
}

cplx Rewriter::vacuum_moment(const Expression& e) const {
  RewriteOptions o;
  o.vacuum_only = true;
  return normal_order(e, o).form.scalar_part();
}

double max_difference(const Expression& a, const Expression& b) {
  double m = 0.0;
  for (const auto& [w, c] : a.terms()) {
    const auto it = b.terms().find(w);
    m = std::max(m, std::abs(c - (it == b.terms().end() ? cplx(0.0) : it->second)));
  }
  for (const auto& [w, c] : b.terms()) {
    if (a.terms().find(w) == a.terms().end()) m = std::max(m, std::abs(c));
  }
  return m;
}

Json to_json(const Expression& e, const SymbolTable& symbols) {
  Json terms = Json::array();
  for (const auto& [w, c] : e.terms()) {
    Json word = Json::array();
    for (const auto& letter : w) {
      word.push_back({{"kind", to_string(letter.kind)}, {"symbol", symbols.describe(letter.symbol)}});
    }
    terms.push_back({{"coefficient", complex_json(c)}, {"word", word}});
  }
  return terms;
}

std::vector<CheckRecord> check_commuting_family(const Rewriter& rw, double s, const Monomial& phi,
                                                const Monomial& psi, double tol) {
  const Expression qa = Expression::field(s, phi), qb = Expression::field(s, psi);
  const Expression prod = rw.normal_order(qa * qb).form;
  const Expression comm = rw.normal_order(qa * qb - qb * qa).form;
  const Expression qa_star = qa.adjoint();
  const Expression normality = rw.normal_order(qa * qa_star - qa_star * qa).form;
  const Expression prod_n = rw.normal_order(qa * qa_star).form;
  const double r1 = scaled(comm.max_coefficient(), prod.max_coefficient());
  const double r2 = scaled(normality.max_coefficient(), prod_n.max_coefficient());
  const std::string tag = " (s=" + Json(s).dump() + ")";
  return {
      asserted("[Q_s(phi), Q_s(psi)] normal-orders to 0" + tag, kCommutingLocation, r1, tol, r1, 0.0,
               std::to_string(comm.terms().size()) + " surviving terms"),
      asserted("Q_s(phi) normal" + tag, kCommutingLocation, r2, tol, r2, 0.0,
               "[Q_s(phi), Q_s(phi)^*] normal-orders to 0"),
  };
}

CheckRecord check_factorization(const Rewriter& rw, double s, const Monomial& phi1, const Monomial& phi2,
                                int p, int q, double tol) {
  const SymbolTable& sym = rw.symbols();
  for (const auto& m : {multiply(phi1, phi2), multiply(phi1, conjugate(phi2))}) {
    if (sym.evaluate(m).value().cwiseAbs().maxCoeff() != 0.0) throw Error("factorization needs disjoint supports");
  }
  const Expression q1 = Expression::field(s, phi1), q2 = Expression::field(s, phi2);
  const cplx joint = rw.vacuum_moment(q1.power(p) * q2.power(q));
  const cplx separate = rw.vacuum_moment(q1.power(p)) * rw.vacuum_moment(q2.power(q));
  const double r = scaled(std::abs(joint - separate), std::abs(separate));
  return asserted("tau(Q1^" + std::to_string(p) + " Q2^" + std::to_string(q) + ") factorizes", kIndependenceLocation,
                  r, tol, complex_json(joint), complex_json(separate), "disjoint supports");
}

double gamma_raw_moment(double alpha, double theta, int m) {
  double v = 1.0;
  for (int i = 0; i < m; ++i) v *= theta * (alpha + i);
  return v;
}

std::vector<CheckRecord> gamma_moment_check(double gamma0, double t, int m_max, RelationTable table,
                                            double tol) {
  if (!(t > 0.0)) throw Error("gamma check needs t > 0");
  table.gamma0 = gamma0;
  SymbolTable sym(Algebra::functions(PointMeasureSpace({t, 1.0}, {"X", "rest"})));
  VectorXc chi(2);
  chi << 1.0, 0.0;
  const Monomial c = sym.add("chi", sym.algebra().from_values(chi));
  const Rewriter rw(sym, table);
  const Expression q = Expression::field(2.0, c);
  std::vector<double> tau{1.0};
  for (int j = 1; j <= m_max; ++j) tau.push_back(rw.vacuum_moment(q.power(j)).real());
  const double l = 1.0 / gamma0, alpha = gamma0 * t / 2.0, theta = 2.0 / gamma0;
  auto moment = [&](double scale, int m) {
    double v = 0.0;
    for (int j = 0; j <= m; ++j) {
      v += binomial(static_cast<unsigned>(m), static_cast<unsigned>(j)).convert_to<double>() *
           std::pow(scale, j) * tau[static_cast<std::size_t>(j)] * std::pow(t, m - j);
    }
    return v;
  };
  double err = 0.0, literal_err = 0.0;
  Json measured = Json::array(), literal = Json::array(), expected = Json::array();
  for (int m = 1; m <= m_max; ++m) {
    const double g = gamma_raw_moment(alpha, theta, m);
    const double x = moment(l, m), y = moment(gamma0, m);
    measured.push_back(x);
    literal.push_back(y);
    expected.push_back(g);
    err = std::max(err, std::abs(x - g) / std::abs(g));
    literal_err = std::max(literal_err, std::abs(y - g) / std::abs(g));
  }
  const std::string tag = " (gamma0=" + Json(gamma0).dump() + ", t=" + Json(t).dump() + ")";
  return {
      asserted("gamma moments of (1/gamma0) Q_2(chi) + t" + tag, kGammaLocation, err, tol, measured, expected,
               "kappa=" + Json(table.kappa).dump() + ", alpha = gamma0 t / 2, theta = 2 / gamma0"),
      reported("gamma moments of the literal gamma0 Q_2(chi) + t" + tag, kGammaLocation,
               Json{{"moments", literal}, {"max_relative_error", literal_err}}, expected,
               literal_err <= tol ? "literal scaling also matches (gamma0 = 1)" : "literal scaling does not match"),
  };
}

NogoCertificate nogo_certificate(double gamma0, double l, double c, const RelationTable& table) {
  if (!(l > 0.0) || !(gamma0 > 0.0)) throw Error("no-go certificate needs l > 0 and gamma0 > 0");
  NogoCertificate out;
  out.closed_form = 2.0 * c * c * l * l + 4.0 * c * l + 2.0 * gamma0 * l;
  RelationTable t = table;
  t.gamma0 = gamma0;
  SymbolTable sym(Algebra::functions(PointMeasureSpace({l, 1.0}, {"X", "rest"})));
  VectorXc chi(2);
  chi << 1.0, 0.0;
  const Monomial x = sym.add("chi", sym.algebra().from_values(chi));
  const Rewriter rw(sym, t);
  const Expression v = c * (Expression::letter(LetterKind::a_star, x) * Expression::letter(LetterKind::a_star, x)) +
                       Expression::letter(LetterKind::b_star, x);
  out.symbolic = rw.vacuum_moment(v.adjoint() * v);
  out.minimizer = -1.0 / l;
  out.min_value = 2.0 * gamma0 * l - 2.0;
  return out;
}

std::vector<CheckRecord> check_nogo(double gamma0, double l, double tol) {
  double diff = 0.0;
  for (double c : {-2.0, -1.0 / l, -0.5, 0.0, 0.75, 1.5}) {
    const NogoCertificate cert = nogo_certificate(gamma0, l, c);
    diff = std::max(diff, scaled(std::abs(cert.symbolic - cert.closed_form), std::abs(cert.closed_form)));
  }
  const NogoCertificate at_min = nogo_certificate(gamma0, l, -1.0 / l);
  const double min_dev = scaled(std::abs(at_min.symbolic - at_min.min_value), std::abs(at_min.min_value));
  const std::string tag = " (gamma0=" + Json(gamma0).dump() + ", l=" + Json(l).dump() + ")";
  std::vector<CheckRecord> out{
      asserted("no-go Gram value closed form vs normal ordering" + tag, kNogoLocation, diff, tol, diff, 0.0,
               "c over a fixed grid including the minimizer"),
      asserted("no-go minimum 2 gamma0 l - 2 at c = -1/l" + tag, kNogoLocation, min_dev, tol,
               Json{{"min_value", at_min.min_value}, {"minimizer", at_min.minimizer},
                    {"symbolic", complex_json(at_min.symbolic)}},
               Json{{"min_value", 2.0 * gamma0 * l - 2.0}}),
  };
  const double boundary = 1.0 / gamma0;
  if (std::abs(l - boundary) <= 1e-12 * boundary) {
    out.push_back(reported("no-go sign at the boundary l = 1/gamma0" + tag, kNogoLocation, at_min.min_value, 0.0,
                           "minimum vanishes"));
  } else {
    const bool negative = at_min.min_value < 0.0, predicted = l < boundary;
    out.push_back(asserted("no-go minimum negative iff l < 1/gamma0" + tag, kNogoLocation,
                           negative == predicted ? 0.0 : 1.0, 0.0, Json{{"negative", negative}},
                           Json{{"negative", predicted}},
                           negative ? "positivity fails: no Fock representation" : "form nonnegative here"));
  }
  return out;
}

std::vector<CheckRecord> check_rewriting(const Rewriter& rw, const std::vector<Monomial>& pool, int words,
                                         int max_length, int strategies, std::mt19937_64& rng, double tol) {
  using K = LetterKind;
  if (pool.empty()) throw Error("empty symbol pool");
  // Mixed sectors avoid words that would create an n next to a or a*.
  const std::vector<std::vector<K>> sectors{
      {K::b_star, K::b, K::n}, {K::a_star, K::a, K::b_star}, {K::a_star, K::a, K::b}};
  std::uniform_int_distribution<std::size_t> pick_sector(0, sectors.size() - 1);
  std::uniform_int_distribution<int> len(1, max_length);
  std::uniform_int_distribution<std::size_t> sym(0, pool.size() - 1);
  std::bernoulli_distribution coin;
  auto random_word = [&]() {
    const auto& kinds = sectors[pick_sector(rng)];
    std::uniform_int_distribution<std::size_t> kind(0, kinds.size() - 1);
    Word w;
    for (int i = len(rng); i > 0; --i) {
      Monomial m = pool[sym(rng)];
      if (coin(rng)) m = conjugate(m);
      w.push_back(make(kinds[kind(rng)], m));
    }
    return w;
  };
  double worst_ratio = 0.0;
  bool all_normal = true;
  std::uint64_t total_steps = 0;
  for (int i = 0; i < words; ++i) {
    Expression e;
    e.add(random_word(), 1.0);
    const RewriteResult r = rw.normal_order(e);
    total_steps += r.steps;
    worst_ratio = std::max(worst_ratio, static_cast<double>(r.steps) / r.step_bound);
    for (const auto& [w, c] : r.form.terms()) all_normal = all_normal && is_normal(w);
  }
  double spread = 0.0;
  const int samples = std::min(words, 10);
  for (int i = 0; i < samples; ++i) {
    Expression e;
    e.add(random_word(), 1.0);
    const Expression base = rw.normal_order(e).form;
    for (int sidx = 0; sidx < strategies; ++sidx) {
      RewriteOptions o;
      o.strategy = Strategy::random;
      o.seed = rng();
      spread = std::max(spread, scaled(max_difference(base, rw.normal_order(e, o).form), base.max_coefficient()));
    }
  }
  return {
      asserted("rewriting terminates within 4^length steps", kNormalLocation, std::max(0.0, worst_ratio - 1.0), 0.0,
               Json{{"max_steps_over_bound", worst_ratio}, {"total_steps", total_steps}, {"words", words}},
               Json{{"max_steps_over_bound_at_most", 1.0}}),
      asserted("rewriting results are normal ordered", kNormalLocation, all_normal ? 0.0 : 1.0, 0.0, all_normal, true),
      asserted("normal form independent of rule order", kNormalLocation, spread, tol, spread, 0.0,
               std::to_string(samples) + " words x " + std::to_string(strategies) + " randomized strategies"),
  };
}

std::vector<CheckRecord> check_engine_against_fock(const Algebra& algebra, double gamma0, int truncation,
                                                   int words, int max_length, std::mt19937_64& rng,
                                                   double tol) {
  if (max_length > 2 * truncation) throw Error("engine comparison words exceed the truncation");
  const BosonicFock fock({gamma0, truncation, algebra});
  SymbolTable sym(algebra);
  std::vector<Monomial> pool;
  std::vector<Element> values;
  for (int i = 0; i < 3; ++i) {
    values.push_back(algebra.random(rng));
    pool.push_back(sym.add("f" + std::to_string(i), values.back()));
  }
  const CommutatorMeasurement m = measure_commutators(fock, values[0], values[1], values[2]);
  const Rewriter rw(sym, RelationTable::fock(gamma0, m.kappa));
  using K = LetterKind;
  const std::vector<std::pair<K, OperatorKind>> kinds{
      {K::b_star, OperatorKind::creation}, {K::b, OperatorKind::annihilation}, {K::n, OperatorKind::number}};
  std::uniform_int_distribution<int> len(1, max_length);
  std::uniform_int_distribution<std::size_t> pick_kind(0, kinds.size() - 1), pick_sym(0, pool.size() - 1);
  double worst = 0.0;
  for (int i = 0; i < words; ++i) {
    Word w;
    std::vector<FockLetter> letters;
    for (int j = len(rng); j > 0; --j) {
      const auto& [lk, ok] = kinds[pick_kind(rng)];
      const std::size_t s = pick_sym(rng);
      w.push_back(make(lk, pool[s]));
      letters.push_back({ok, values[s]});
    }
    Expression e;
    e.add(w, 1.0);
    const cplx engine = rw.vacuum_moment(e);
    const cplx matrices = fock.vacuum_expectation(letters);
    worst = std::max(worst, scaled(std::abs(engine - matrices), std::abs(matrices)));
  }
  return {
      asserted("engine with measured coefficients equals bosonic Fock matrices", kFockLocation, worst, tol, worst, 0.0,
               "table (c1, c2, kappa) = (2, 4, " + Json(m.kappa).dump() + "), words up to length " +
                   std::to_string(max_length)),
  };
}

}  // namespace qwn
