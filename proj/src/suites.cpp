#include "qwn/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <chrono>
#include <map>
#include <random>

#include "qwn/bosonic_fock.hpp"
#include "qwn/combinatorics.hpp"
#include "qwn/diagonal_rep.hpp"
#include "qwn/free_fock.hpp"
#include "qwn/linalg.hpp"
#include "qwn/qdeform.hpp"
#include "qwn/rewrite.hpp"

namespace qwn {

namespace {

const std::vector<std::string> kSuites{"bosonic", "classical", "diagonal", "free", "nogo", "qdeform"};

struct Context {
  const RunConfig& config;
  std::mt19937_64 rng;
  double tol(double fallback) const { return config.tol.value_or(fallback); }
};

std::mt19937_64 suite_rng(std::uint64_t seed, const std::string& suite) {
  std::seed_seq seq(suite.begin(), suite.end());
  std::vector<std::uint32_t> mix(2);
  seq.generate(mix.begin(), mix.end());
  std::seed_seq full{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), mix[0], mix[1]};
  return std::mt19937_64(full);
}

PointMeasureSpace random_space(std::mt19937_64& rng, int d, double scale = 1.0) {
  std::uniform_real_distribution<double> w(0.2, 1.5);
  std::vector<double> weights;
  for (int i = 0; i < d; ++i) weights.push_back(scale * w(rng));
  return PointMeasureSpace(weights);
}

PointMeasureSpace config_space(const RunConfig& c, std::mt19937_64& rng) {
  if (c.weights) return PointMeasureSpace(*c.weights);
  return random_space(rng, c.dim);
}

Algebra make_algebra(const RunConfig& c, std::mt19937_64& rng) {
  if (c.algebra == "matrices") return Algebra::matrices(static_cast<std::size_t>(c.dim));
  return Algebra::functions(config_space(c, rng));
}

void append(std::vector<CheckRecord>& out, std::vector<CheckRecord> more) {
  for (auto& r : more) out.push_back(std::move(r));
}

std::vector<CheckRecord> bosonic_suite(Context& ctx) {
  const RunConfig& c = ctx.config;
  const int n = c.truncation_for("bosonic");
  std::vector<CheckRecord> out;
  const Algebra alg = make_algebra(c, ctx.rng);
  const BosonicFock fock({c.gamma0, n, alg});
  const GramStack stack = fock.gram_stack();
  out.push_back(check_positivity(fock, stack, ctx.tol(1e-10)));
  // The remaining bosonic checks are stated for commutative algebras only.
  if (!alg.is_commutative()) return out;
  std::vector<std::vector<CheckRecord>> trials;
  for (int t = 0; t < c.trials; ++t) {
    std::vector<CheckRecord> r;
    const Element phi = alg.random(ctx.rng), psi = alg.random(ctx.rng), zeta = alg.random(ctx.rng);
    append(r, check_gram_closed_forms(fock, phi, psi, ctx.tol(1e-10)));
    append(r, check_adjointness(fock, stack, zeta, ctx.tol(1e-9)));
    append(r, check_commutators(fock, phi, psi, zeta, ctx.tol(1e-10)));
    for (int k = 1; k <= n; ++k) append(r, check_norm_estimates(fock, stack, phi, k, ctx.tol(1e-9)));
    trials.push_back(std::move(r));
  }
  append(out, worst_of(trials));
  double path = 0.0;
  for (int k = 0; k <= std::min(n, 5); ++k) path = std::max(path, gram_path_deviation(fock, k));
  out.push_back(asserted("Gram ordered vs set partition paths", "bosonic quadratic Fock space: sesquilinear form over ordered partitions",
                         path, ctx.tol(1e-10), path, 0.0, "relative, grades <= min(N, 5)"));
  out.push_back(check_symmetry_preservation(fock, c.trials, ctx.rng, ctx.tol(1e-12)));
  return out;
}

std::vector<CheckRecord> diagonal_suite(Context& ctx) {
  const RunConfig& c = ctx.config;
  if (c.algebra != "functions") throw UsageError("diagonal suite needs --algebra functions");
  const DiagonalRepresentation rep(c.gamma0, config_space(c, ctx.rng));
  return check_diagonal_against_tensor(rep, c.truncation_for("diagonal"), c.trials, ctx.rng, ctx.tol(1e-10));
}

std::vector<CheckRecord> free_suite(Context& ctx) {
  const RunConfig& c = ctx.config;
  const int n = c.truncation_for("free");
  const Algebra alg = make_algebra(c, ctx.rng);
  const FreeFock fock({c.gamma, n, alg});
  std::vector<MatrixXc> grams;
  for (int k = 0; k <= n; ++k) grams.push_back(fock.gram(k));
  std::vector<CheckRecord> out{check_free_positivity(fock, grams, ctx.tol(1e-10))};
  const int length = std::min({c.order, 2 * n, 10});
  std::vector<std::vector<CheckRecord>> trials;
  for (int t = 0; t < c.trials; ++t) {
    std::vector<CheckRecord> r;
    const Element a = alg.random(ctx.rng), b = alg.random(ctx.rng), z = alg.random(ctx.rng), e = alg.random(ctx.rng);
    append(r, check_free_relations(fock, a, b, z, e, ctx.tol(1e-12)));
    append(r, check_free_adjointness(fock, grams, z, ctx.tol(1e-10)));
    append(r, check_free_norms(fock, grams, a, ctx.tol(1e-9)));
    trials.push_back(std::move(r));
  }
  append(out, worst_of(trials));
  append(out, check_free_moments(fock, c.s, length, c.trials, ctx.rng, ctx.tol(1e-9)));
  out.push_back(check_traciality(fock, c.s, std::min(3, n), c.trials, ctx.rng, ctx.tol(1e-9)));
  if (alg.is_commutative() && alg.dimension() >= 2) {
    out.push_back(check_freeness(fock, c.s, std::min(c.order, 2 * n), c.trials, ctx.rng, ctx.tol(1e-9)));
  }
  return out;
}

std::vector<CheckRecord> qdeform_suite(Context& ctx) {
  const RunConfig& c = ctx.config;
  const int n = c.truncation_for("qdeform");
  if (c.algebra != "functions") throw UsageError("qdeform suite needs --algebra functions");
  const QFock fock({c.q, n, config_space(c, ctx.rng)});
  std::vector<CheckRecord> out{check_q_positivity(fock)};
  std::vector<std::vector<CheckRecord>> trials;
  for (int t = 0; t < c.trials; ++t) {
    std::vector<CheckRecord> r;
    const Algebra& alg = fock.algebra();
    const Element a = alg.random(ctx.rng), b = alg.random(ctx.rng);
    append(r, check_q_relation(fock, a, b, ctx.tol(1e-9)));
    if (n >= 4) r.push_back(check_squared_relation(fock, a, b, ctx.tol(1e-9)));
    r.push_back(check_q_adjointness(fock, a, ctx.tol(1e-10)));
    trials.push_back(std::move(r));
  }
  append(out, worst_of(trials));
  // Two atoms per block, each block of mass l.
  const int blocks = std::min(c.dim, 2);
  std::uniform_real_distribution<double> split(0.2, 0.8);
  std::vector<double> weights;
  ModeBlocks mb{c.l, {}};
  for (int i = 0; i < blocks; ++i) {
    const double f = split(ctx.rng);
    weights.push_back(f * c.l);
    weights.push_back((1.0 - f) * c.l);
    mb.blocks.push_back({2 * i, 2 * i + 1});
  }
  const QFock fine({c.q, std::min(n, 4), PointMeasureSpace(weights)});
  std::vector<std::vector<CheckRecord>> sss;
  for (int t = 0; t < c.trials; ++t) {
    const VectorXc pv = random_vector(ctx.rng, blocks), sv = random_vector(ctx.rng, blocks);
    sss.push_back(check_discretized_sss(fine, mb, piecewise(fine, mb, pv), piecewise(fine, mb, sv), ctx.tol(1e-9)));
  }
  append(out, worst_of(sss));
  return out;
}

std::vector<CheckRecord> classical_suite(Context& ctx) {
  const RunConfig& c = ctx.config;
  std::vector<CheckRecord> out;
  std::vector<std::pair<double, double>> points{{1.0, 1.0}, {2.0, 1.5}, {1.0, 3.0}};
  if (std::find(points.begin(), points.end(), std::make_pair(c.gamma0, 1.0)) == points.end()) {
    points.emplace_back(c.gamma0, 1.0);
  }
  for (const auto& [g, t] : points) append(out, gamma_moment_check(g, t, 6, RelationTable{}, ctx.tol(1e-9)));
  // Two disjoint supports over a d-point space with d >= 2.
  const int d = std::max(c.dim, 2);
  const Algebra alg = Algebra::functions(c.weights && c.weights->size() >= 2 ? PointMeasureSpace(*c.weights)
                                                                             : random_space(ctx.rng, d));
  SymbolTable sym(alg);
  std::vector<Monomial> pool;
  for (int i = 0; i < 3; ++i) pool.push_back(sym.add("g" + std::to_string(i), alg.random(ctx.rng)));
  VectorXc left = alg.random(ctx.rng).value().col(0), right = alg.random(ctx.rng).value().col(0);
  for (int i = 0; i < d; ++i) (i % 2 == 0 ? right : left)(i) = 0.0;
  const Monomial d1 = sym.add("left", alg.from_values(left)), d2 = sym.add("right", alg.from_values(right));
  const Rewriter rw(sym, RelationTable{c.gamma0});
  std::vector<std::vector<CheckRecord>> fam;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) fam.push_back(check_commuting_family(rw, c.s, pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)], ctx.tol(1e-12)));
  }
  fam.push_back(check_commuting_family(rw, c.s, d1, d2, ctx.tol(1e-12)));
  append(out, worst_of(fam));
  std::vector<std::vector<CheckRecord>> fac;
  for (int p = 0; p <= 4; ++p) {
    for (int q = 0; q <= 4; ++q) {
      CheckRecord r = check_factorization(rw, c.s, d1, d2, p, q, ctx.tol(1e-10));
      r.name = "tau(Q1^p Q2^q) factorizes, p, q <= 4";
      fac.push_back({r});
    }
  }
  append(out, worst_of(fac));
  append(out, check_rewriting(rw, pool, 100 * c.trials, 10, 20, ctx.rng, ctx.tol(1e-12)));
  append(out, check_engine_against_fock(alg, c.gamma0, 3, 10 * c.trials, 6, ctx.rng, ctx.tol(1e-9)));
  return out;
}

std::vector<CheckRecord> nogo_suite(Context& ctx) {
  return check_nogo(ctx.config.gamma0, ctx.config.l, ctx.tol(1e-12));
}

double residual_rank(const CheckRecord& r) { return std::isnan(r.residual) ? INFINITY : r.residual; }

void merge_algebra(RunConfig& c, const Json& value) {
  if (value.is_string()) {
    c.algebra = value.get<std::string>();
    return;
  }
  if (!value.is_object()) throw UsageError("algebra must be a string or an object");
  c.algebra = value.value("kind", std::string("functions"));
  for (const auto& [key, v] : value.items()) {
    if (key == "kind") continue;
    if (key == "weights") {
      c.weights = v.get<std::vector<double>>();
    } else if (key == "points") {
      std::vector<double> w;
      for (const auto& point : v) w.push_back(point.is_number() ? point.get<double>() : point.at("weight").get<double>());
      c.weights = w;
    } else if (key == "dim") {
      c.dim = v.get<int>();
    } else if (key == "state") {
      if (v.get<std::string>() != "trace") throw UsageError("only the normalized trace state is supported");
      if (c.algebra != "matrices") throw UsageError("state \"trace\" needs a matrix algebra");
    } else {
      throw UsageError("unknown algebra key " + key);
    }
  }
  if (c.weights) c.dim = static_cast<int>(c.weights->size());
}

void validate_common(const RunConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(name) + " must be positive");
  };
  positive(c.gamma0, "gamma0");
  positive(c.gamma, "gamma");
  positive(c.l, "l");
  if (!std::isfinite(c.s)) throw UsageError("s must be finite");
  if (!std::isfinite(c.kappa)) throw UsageError("kappa must be finite");
  if (!(c.q > -1.0 && c.q <= 1.0)) throw UsageError("q must lie in (-1, 1]");
  if (c.algebra != "functions" && c.algebra != "matrices") throw UsageError("algebra must be functions or matrices");
  if (c.dim < 1 || c.dim > 4) throw UsageError("dim must lie in 1..4");
  if (c.weights) {
    if (c.algebra != "functions") throw UsageError("point weights need a function algebra");
    if (c.weights->size() != static_cast<std::size_t>(c.dim)) throw UsageError("dim must equal the number of weights");
    for (double w : *c.weights) {
      if (!(w > 0.0) || !std::isfinite(w)) throw UsageError("point weights must be finite and positive");
    }
  }
  if (c.trials < 1 || c.trials > 10000) throw UsageError("trials must lie in 1..10000");
  if (c.order < 2 || c.order > 10) throw UsageError("order must lie in 2..10");
  if (c.tol && (!(*c.tol > 0.0) || !std::isfinite(*c.tol))) throw UsageError("tol must be positive");
  if (c.truncation && (*c.truncation < 1 || *c.truncation > 5)) throw UsageError("truncation must lie in 1..5");
}

}  // namespace

void RunConfig::validate() const {
  if (suite.empty()) throw UsageError("no suite selected");
  validate_common(*this);
  if (suite == "rewrite") return;
  if (suite != "all" && std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) {
    throw UsageError("unknown suite " + suite);
  }
  for (const auto& name : suite == "all" ? kSuites : std::vector<std::string>{suite}) {
    if (name == "qdeform" && truncation_for(name) < 2) throw UsageError("qdeform needs truncation >= 2");
  }
}

int RunConfig::truncation_for(const std::string& name) const {
  if (truncation) return *truncation;
  return name == "qdeform" ? 4 : 3;
}

Json RunConfig::to_json() const {
  Json j{{"suite", suite}, {"gamma0", gamma0}, {"gamma", gamma}, {"q", q}, {"s", s}, {"l", l},
         {"algebra", algebra}, {"dim", dim}, {"trials", trials}, {"order", order}, {"seed", seed}};
  j["truncation"] = truncation ? Json(*truncation) : Json(nullptr);
  j["tol"] = tol ? Json(*tol) : Json(nullptr);
  j["weights"] = weights ? Json(*weights) : Json(nullptr);
  j["kappa"] = kappa;
  j["symbols"] = symbols;
  return j;
}

void RunConfig::merge(const Json& j) {
  if (!j.is_object()) throw UsageError("configuration must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "suite") suite = value.get<std::string>();
      else if (key == "gamma0") gamma0 = value.get<double>();
      else if (key == "gamma") gamma = value.get<double>();
      else if (key == "q") q = value.get<double>();
      else if (key == "s") s = value.get<double>();
      else if (key == "l") l = value.get<double>();
      else if (key == "algebra") merge_algebra(*this, value);
      else if (key == "dim") dim = value.get<int>();
      else if (key == "truncation") truncation = value.is_null() ? std::nullopt : std::optional<int>(value.get<int>());
      else if (key == "trials") trials = value.get<int>();
      else if (key == "order") order = value.get<int>();
      else if (key == "seed") seed = value.get<std::uint64_t>();
      else if (key == "tol") tol = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
      else if (key == "output") output = value.get<std::string>();
      else if (key == "kappa") kappa = value.get<double>();
      else if (key == "symbols") {
        if (!value.is_object()) throw UsageError("symbols must be an object");
        symbols = value;
      }
      else throw UsageError("unknown configuration key " + key);
    }
  } catch (const Json::exception& e) {
    throw UsageError(std::string("bad configuration value: ") + e.what());
  }
}

const std::vector<std::string>& suite_names() { return kSuites; }

std::vector<CheckRecord> worst_of(const std::vector<std::vector<CheckRecord>>& trials) {
  std::vector<CheckRecord> out;
  std::map<std::string, std::size_t> index;
  for (const auto& trial : trials) {
    for (const auto& r : trial) {
      const auto it = index.find(r.name);
      if (it == index.end()) {
        index.emplace(r.name, out.size());
        out.push_back(r);
        continue;
      }
      CheckRecord& kept = out[it->second];
      if (kept.status == Status::reported) continue;
      const bool worse_status = kept.status == Status::pass && r.status == Status::fail;
      const bool same_status = kept.status == r.status;
      if (worse_status || (same_status && residual_rank(r) > residual_rank(kept))) kept = r;
    }
  }
  if (trials.size() > 1) {
    for (auto& r : out) {
      if (r.status == Status::reported) continue;
      const std::string note = "worst of " + std::to_string(trials.size()) + " trials";
      r.notes = r.notes.empty() ? note : r.notes + "; " + note;
    }
  }
  return out;
}

SymbolTable rewrite_symbols(const RunConfig& config) {
  if (config.algebra != "functions") throw UsageError("rewrite needs a function algebra");
  const PointMeasureSpace space = config.weights ? PointMeasureSpace(*config.weights)
                                                 : PointMeasureSpace::uniform(static_cast<std::size_t>(config.dim), 1.0);
  const Algebra alg = Algebra::functions(space);
  SymbolTable table(alg);
  for (std::size_t i = 0; i < alg.dimension(); ++i) table.add("e" + std::to_string(i), alg.basis(i));
  for (const auto& [name, values] : config.symbols.items()) {
    if (name == "1" || table.contains(name)) throw UsageError("symbol " + name + " is already defined");
    if (!values.is_array() || values.size() != alg.dimension()) {
      throw UsageError("symbol " + name + " needs " + std::to_string(alg.dimension()) + " values");
    }
    VectorXc v(static_cast<Eigen::Index>(values.size()));
    try {
      for (std::size_t i = 0; i < values.size(); ++i) {
        const Json& x = values[i];
        v(static_cast<Eigen::Index>(i)) = x.is_array() ? cplx(x.at(0).get<double>(), x.at(1).get<double>())
                                                       : cplx(x.get<double>(), 0.0);
      }
    } catch (const Json::exception& e) {
      throw UsageError("bad value for symbol " + name + ": " + e.what());
    }
    table.add(name, alg.from_values(v));
  }
  return table;
}

VerificationReport run_rewrite(const RunConfig& config, const Json& word) {
  RunConfig c = config;
  c.suite = "rewrite";
  c.validate();
  const auto start = std::chrono::steady_clock::now();
  SymbolTable symbols = rewrite_symbols(c);
  if (!word.is_array() || word.empty()) throw UsageError("word must be a nonempty JSON list");
  if (word.size() > kMaxWordLength) throw UsageError("word longer than " + std::to_string(kMaxWordLength));
  Expression e = Expression::scalar(1.0);
  std::vector<std::string> shown;
  try {
    for (const auto& item : word) {
      const std::string kind = item.at("kind").get<std::string>();
      const std::string name = item.at("symbol").get<std::string>();
      if (name != "1" && !symbols.contains(name)) throw UsageError("unknown symbol " + name);
      e = e * Expression::letter(letter_kind_from_string(kind), symbols.get(name));
      shown.push_back(kind + "(" + name + ")");
    }
  } catch (const Json::exception& ex) {
    throw UsageError(std::string("bad word entry: ") + ex.what());
  } catch (const UsageError&) {
    throw;
  } catch (const Error& ex) {
    throw UsageError(ex.what());
  }
  RelationTable table;
  table.gamma0 = c.gamma0;
  table.kappa = c.kappa;
  const Rewriter rw(std::move(symbols), table);
  const RewriteResult result = rw.normal_order(e);
  bool normal = true;
  for (const auto& [w, coef] : result.form.terms()) normal = normal && is_normal(w);
  const std::string location = "quadratic and linear relations: normal ordering";
  std::string label;
  for (const auto& part : shown) label += (label.empty() ? "" : " ") + part;
  VerificationReport report;
  report.config = c.to_json();
  report.config["word"] = word;
  std::vector<CheckRecord> records;
  records.push_back(asserted("normal form is normally ordered", location, normal ? 0.0 : 1.0, 0.0));
  records.push_back(asserted("rewriting terminates within 4^length steps", location,
                             std::max(0.0, static_cast<double>(result.steps) - result.step_bound), 0.0,
                             static_cast<double>(result.steps), result.step_bound));
  records.push_back(reported("normal form of " + label, location, to_json(result.form, rw.symbols())));
  records.push_back(reported("vacuum moment of " + label, location, complex_json(result.form.scalar_part())));
  report.add_all(std::move(records), "rewrite");
  report.sort();
  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

VerificationReport run_combinatorics_selftest() {
  const auto start = std::chrono::steady_clock::now();
  const std::string location = "partition families in the moment and Gram formulas";
  std::vector<CheckRecord> records;
  auto family = [&](const std::string& name, int max_n, const std::function<std::size_t(int)>& enumerate,
                    const std::function<BigInt(int)>& count) {
    Json measured = Json::array(), expected = Json::array();
    double worst = 0.0;
    for (int n = 0; n <= max_n; ++n) {
      const std::size_t got = enumerate(n);
      const BigInt want = count(n);
      measured.push_back(got);
      expected.push_back(want.convert_to<std::uint64_t>());
      worst = std::max(worst, std::abs(static_cast<double>(got) - want.convert_to<double>()));
    }
    records.push_back(asserted(name + " count, n <= " + std::to_string(max_n), location, worst, 0.0, measured, expected));
  };
  family("set partitions", 10, [](int n) {
    std::size_t c = 0;
    for_each_set_partition(n, [&](const SetPartition&) { ++c; });
    return c;
  }, [](int n) { return bell(static_cast<unsigned>(n)); });
  family("ordered partitions", 8, [](int n) {
    std::size_t c = 0;
    for_each_ordered_partition(n, [&](const OrderedPartition&) { ++c; });
    return c;
  }, [](int n) { return ordered_partition_count(static_cast<unsigned>(n)); });
  family("noncrossing partitions", 10, [](int n) {
    std::size_t c = 0;
    for_each_noncrossing_partition(n, [&](const NoncrossingPartition&) { ++c; });
    return c;
  }, [](int n) { return catalan(static_cast<unsigned>(n)); });
  family("interval compositions", 12, [](int n) {
    std::size_t c = 0;
    for_each_interval_composition(n, [&](const IntervalComposition&) { ++c; });
    return c;
  }, [](int n) { return n == 0 ? BigInt(1) : BigInt(1) << (n - 1); });
  VerificationReport report;
  report.config = Json{{"suite", "combinatorics selftest"}};
  report.add_all(std::move(records), "combinatorics");
  report.sort();
  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

VerificationReport run_suite(const RunConfig& config) {
  if (config.suite == "rewrite") throw UsageError("rewrite is not a verification suite");
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  report.config = config.to_json();
  const std::vector<std::string> selected = config.suite == "all" ? kSuites : std::vector<std::string>{config.suite};
  for (const auto& name : selected) {
    Context ctx{config, suite_rng(config.seed, name)};
    std::vector<CheckRecord> records;
    if (name == "bosonic") records = bosonic_suite(ctx);
    else if (name == "diagonal") records = diagonal_suite(ctx);
    else if (name == "free") records = free_suite(ctx);
    else if (name == "qdeform") records = qdeform_suite(ctx);
    else if (name == "classical") records = classical_suite(ctx);
    else if (name == "nogo") records = nogo_suite(ctx);
    report.add_all(std::move(records), name);
  }
  report.sort();
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace qwn
