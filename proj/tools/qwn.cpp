#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qwn/report.hpp"
#include "qwn/suites.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::optional<double> gamma0, gamma, q, s, l, tol, kappa;
  std::optional<std::string> algebra, output;
  std::optional<int> dim, truncation, trials, order;
  std::optional<std::uint64_t> seed;
  std::string config_path;
};

void add_common(CLI::App& cmd, Flags& f) {
  cmd.add_option("--gamma0", f.gamma0, "quadratic Fock parameter gamma0 > 0");
  cmd.add_option("--gamma", f.gamma, "free Fock parameter gamma > 0");
  cmd.add_option("--q", f.q, "deformation parameter in (-1, 1]");
  cmd.add_option("--s", f.s, "field parameter in Q_s = b* + b + s n");
  cmd.add_option("--l", f.l, "no-go scale / sss block mass");
  cmd.add_option("--algebra", f.algebra, "functions or matrices");
  cmd.add_option("--dim", f.dim, "points of the function algebra or matrix size");
  cmd.add_option("--truncation", f.truncation, "Fock truncation N");
  cmd.add_option("--trials", f.trials, "random trials per check");
  cmd.add_option("--order", f.order, "maximal word length for moment checks");
  cmd.add_option("--seed", f.seed, "random seed (falls back to QWN_SEED, then 0)");
  cmd.add_option("--tol", f.tol, "override every check tolerance");
  cmd.add_option("--output", f.output, "report path, - for stdout");
  cmd.add_option("--config", f.config_path, "JSON config file; flags override it");
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("QWN_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw qwn::UsageError(std::string("QWN_SEED is not an unsigned integer: ") + raw);
  }
}

qwn::RunConfig build_config(const Flags& f, const std::string& suite) {
  qwn::RunConfig c;
  bool seeded = false;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw qwn::UsageError("cannot read config file " + f.config_path);
    qwn::Json j;
    try {
      j = qwn::Json::parse(in);
    } catch (const qwn::Json::exception& e) {
      throw qwn::UsageError(std::string("config file is not valid JSON: ") + e.what());
    }
    c.merge(j);
    seeded = j.is_object() && j.contains("seed");
  }
  if (!suite.empty()) c.suite = suite;
  if (f.gamma0) c.gamma0 = *f.gamma0;
  if (f.gamma) c.gamma = *f.gamma;
  if (f.q) c.q = *f.q;
  if (f.s) c.s = *f.s;
  if (f.l) c.l = *f.l;
  if (f.kappa) c.kappa = *f.kappa;
  if (f.algebra) c.algebra = *f.algebra;
  if (f.dim) c.dim = *f.dim;
  if (f.truncation) c.truncation = *f.truncation;
  if (f.trials) c.trials = *f.trials;
  if (f.order) c.order = *f.order;
  if (f.tol) c.tol = *f.tol;
  if (f.output) c.output = *f.output;
  if (f.seed) {
    c.seed = *f.seed;
  } else if (!seeded) {
    if (auto e = env_seed()) c.seed = *e;
  }
  return c;
}

int finish(const qwn::VerificationReport& report, const std::string& output) {
  qwn::emit_report(report, output);
  return report.any_failed() ? kExitFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic white noise verification lab"};
  app.require_subcommand(1);

  Flags verify_flags;
  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "bosonic|diagonal|free|qdeform|classical|nogo|all");
  add_common(*verify, verify_flags);

  Flags rewrite_flags;
  std::string word;
  auto* rewrite = app.add_subcommand("rewrite", "normal-order one word");
  rewrite->add_option("--word", word, R"(JSON list of {"kind": "b*", "symbol": "e0"})")->required();
  rewrite->add_option("--kappa", rewrite_flags.kappa, "kappa in [n, b*] = kappa b* (default 2)");
  add_common(*rewrite, rewrite_flags);

  auto* comb = app.add_subcommand("combinatorics", "partition enumerators");
  std::string comb_cmd;
  std::string comb_output = "-";
  comb->add_option("command", comb_cmd, "selftest")->required();
  comb->add_option("--output", comb_output, "report path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify) {
      const qwn::RunConfig config = build_config(verify_flags, suite);
      return finish(qwn::run_suite(config), config.output);
    }
    if (*rewrite) {
      const qwn::RunConfig config = build_config(rewrite_flags, "rewrite");
      qwn::Json parsed;
      try {
        parsed = qwn::Json::parse(word);
      } catch (const qwn::Json::exception& e) {
        throw qwn::UsageError(std::string("--word is not valid JSON: ") + e.what());
      }
      return finish(qwn::run_rewrite(config, parsed), config.output);
    }
    if (*comb) {
      if (comb_cmd != "selftest") throw qwn::UsageError("unknown combinatorics command " + comb_cmd);
      return finish(qwn::run_combinatorics_selftest(), comb_output);
    }
  } catch (const qwn::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
