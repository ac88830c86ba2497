#include "explika/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "explika/engine.hpp"
#include "explika/oracle.hpp"
#include "explika/parser.hpp"

namespace explika {

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kInvalid = 2;
constexpr int kInconsistent = 3;
constexpr int kIoError = 4;
constexpr int kLimit = 5;

struct IoFailure {
  std::string message;
};

struct Painter {
  bool on = false;
  std::string operator()(const std::string& text, const char* code) const {
    return on ? std::string("\x1b[") + code + "m" + text + "\x1b[0m" : text;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure{"cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoFailure{"cannot read " + path};
  return buf.str();
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InconsistentTheory:
      return kInconsistent;
    case ErrorKind::LimitExceeded:
      return kLimit;
    default:
      return kInvalid;
  }
}

void report(std::ostream& err, const Painter& paint, const std::string& where, const Error& e) {
  err << where;
  if (e.span()) err << ":" << e.span()->line << ":" << e.span()->column;
  err << ": " << paint("error", "31") << "[" << to_string(e.kind()) << "]: " << e.what() << "\n";
}

AtomId query_atom(const std::string& text, const Theory& theory) {
  try {
    return parse_atom(text, theory);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SyntaxError) throw;
    throw Error(ErrorKind::UnknownAtom, "atom " + text + " is not in the universe");
  }
}

std::string describe_step(const DerivationLog& log, StepId id, const Signature& sig) {
  const DerivationStep& s = log.step(id);
  std::string line = render_explanation({s.explanans, s.explanandum, s.proviso, id}, sig);
  line += "    by " + std::string(to_string(s.rule));
  switch (s.rule) {
    case Rule::Base:
      line += " on (" + sig.atom_text(s.causal.cause) + " => " + sig.atom_text(s.causal.effect) +
              ") through " + sig.atom_text(s.lower);
      break;
    case Rule::Transitivity:
    case Rule::Simplification: {
      line += s.rule == Rule::Transitivity ? " of" : " from";
      for (std::size_t i = 0; i < s.premises.size(); ++i)
        line += (i ? ", #" : " #") + std::to_string(s.premises[i]);
      if (s.background_entails) line += " (background alone suffices)";
      break;
    }
  }
  return line;
}

nlohmann::ordered_json proviso_json(const Proviso& p, const Signature& sig) {
  auto arr = nlohmann::ordered_json::array();
  for (AtomId a : sorted_by_text(p, sig)) arr.push_back(sig.atom_text(a));
  return arr;
}

struct ExplainFlags {
  std::string path;
  std::string from, to;
  bool json = false, trace = false, raw = false;
};

int cmd_explain(const ExplainFlags& flags, std::ostream& out, std::ostream& err, const Painter& paint) {
  const std::string text = read_file(flags.path);
  const Theory theory = parse_theory(text);
  const Signature& sig = theory.signature();
  QueryOptions options;
  options.raw = flags.raw;
  if (!flags.from.empty()) options.from = query_atom(flags.from, theory);
  if (!flags.to.empty()) options.to = query_atom(flags.to, theory);
  const QueryResult result = explain_query(theory, options);

  if (flags.json) {
    nlohmann::ordered_json doc;
    doc["schema"] = "explika/1";
    doc["theory_digest"] = "sha256:" + sha256_hex(render_theory(theory));
    auto records = nlohmann::ordered_json::array();
    std::set<StepId> used;
    for (const ExplanationAtom& a : result.atoms) {
      nlohmann::ordered_json r;
      r["explanans"] = sig.atom_text(a.explanans);
      r["explanandum"] = sig.atom_text(a.explanandum);
      r["proviso"] = proviso_json(a.proviso, sig);
      const std::vector<StepId> trace = result.log->linearize(a.trace);
      r["trace"] = trace;
      used.insert(trace.begin(), trace.end());
      records.push_back(std::move(r));
    }
    doc["explanations"] = std::move(records);
    auto steps = nlohmann::ordered_json::array();
    for (StepId id : used) {
      const DerivationStep& s = result.log->step(id);
      nlohmann::ordered_json j;
      j["id"] = id;
      j["rule"] = to_string(s.rule);
      j["explanans"] = sig.atom_text(s.explanans);
      j["explanandum"] = sig.atom_text(s.explanandum);
      j["proviso"] = proviso_json(s.proviso, sig);
      if (s.rule == Rule::Base) {
        j["causal"] = {sig.atom_text(s.causal.cause), sig.atom_text(s.causal.effect)};
        j["lower"] = sig.atom_text(s.lower);
      } else {
        j["premises"] = s.premises;
      }
      if (s.background_entails) j["background_entails"] = true;
      steps.push_back(std::move(j));
    }
    doc["steps"] = std::move(steps);
    doc["diagnostics"] = result.diagnostics;
    out << doc.dump(2) << "\n";
    for (const std::string& d : result.diagnostics) err << "note: " << d << "\n";
    return kOk;
  }

  for (const std::string& d : result.diagnostics) err << paint("note", "36") << ": " << d << "\n";
  for (const ExplanationAtom& a : result.atoms) {
    out << render_explanation(a, sig) << "\n";
    if (!flags.trace) continue;
    for (StepId id : result.log->linearize(a.trace))
      out << paint("  #" + std::to_string(id) + "  " + describe_step(*result.log, id, sig), "2") << "\n";
  }
  return kOk;
}

int cmd_check(const std::string& path, bool dump_cnf, std::ostream& out) {
  const Theory theory = parse_theory(read_file(path));
  const SaturatedContext ctx = saturate(theory);
  if (dump_cnf) {
    out << ctx.clauses.dimacs(theory.signature());
    return kOk;
  }
  out << "ok: " << ctx.ontology->universe().size() << " atoms in the universe, "
      << theory.causal_atoms().size() << " causal atoms, " << ctx.active.size() << " active\n";
  return kOk;
}

int cmd_ontology(const std::string& path, std::ostream& out) {
  const Theory theory = parse_theory(read_file(path));
  for (const std::string& line : render_links(build_ontology(theory), theory.signature()))
    out << line << "\n";
  return kOk;
}

// Engine and oracle agree when they produce the same set, or both refuse an
// inconsistent theory.
bool diff_one(const Theory& theory, std::ostream& out, const std::string& label) {
  const Signature& sig = theory.signature();
  std::optional<TripleSet> engine, oracle;
  std::string engine_error, oracle_error;
  try {
    engine = triples(derive_all(theory));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InconsistentTheory) throw;
    engine_error = e.what();
  }
  try {
    oracle = oracle_derive(theory);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InconsistentTheory) throw;
    oracle_error = e.what();
  }
  if (!engine && !oracle) return true;
  if (engine && oracle) {
    const OracleDiff diff = compare(*engine, *oracle);
    if (diff.empty()) return true;
    out << label << ": mismatch\n";
    for (const Triple& t : diff.engine_only) out << "  engine only: " << render_triple(t, sig) << "\n";
    for (const Triple& t : diff.oracle_only) out << "  oracle only: " << render_triple(t, sig) << "\n";
    return false;
  }
  out << label << ": mismatch\n";
  out << "  engine: " << (engine ? std::to_string(engine->size()) + " atoms" : engine_error) << "\n";
  out << "  oracle: " << (oracle ? std::to_string(oracle->size()) + " atoms" : oracle_error) << "\n";
  return false;
}

int cmd_diff_file(const std::string& path, std::ostream& out) {
  const Theory theory = parse_theory(read_file(path));
  if (!diff_one(theory, out, path)) return kMismatch;
  out << path << ": engine and oracle agree\n";
  return kOk;
}

int cmd_diff_random(std::uint64_t seed, std::uint64_t count, std::ostream& out) {
  std::uint64_t failures = 0;
  for (std::uint64_t s = seed; s < seed + count; ++s) {
    const Theory theory = random_theory(s);
    if (!diff_one(theory, out, "seed " + std::to_string(s))) {
      ++failures;
      out << render_theory(theory);
    }
  }
  out << count << " theories, " << failures << " mismatches\n";
  return failures ? kMismatch : kOk;
}

}  // namespace

bool color_enabled(const char* setting, bool stdout_is_tty) {
  if (setting == nullptr || std::strcmp(setting, "auto") == 0 || *setting == '\0') return stdout_is_tty;
  return std::strcmp(setting, "always") == 0;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliEnvironment& env) {
  const Painter paint{env.color};
  CLI::App app{"Causal explanation inference over theories with IS-A ontologies", "explika"};
  app.require_subcommand(1);

  std::string check_path;
  bool dump_cnf = false;
  auto* check = app.add_subcommand("check", "Validate a theory and test that it is consistent");
  check->add_option("file", check_path, "Theory file")->required();
  check->add_flag("--dump-cnf", dump_cnf, "Print the saturated background as DIMACS");

  ExplainFlags flags;
  auto* explain = app.add_subcommand("explain", "List derived explanation atoms");
  explain->add_option("file", flags.path, "Theory file")->required();
  explain->add_option("--from", flags.from, "Only this explanans");
  explain->add_option("--to", flags.to, "Only this explanandum");
  explain->add_flag("--json", flags.json, "Emit a JSON document");
  explain->add_flag("--trace", flags.trace, "Show the derivation of each atom");
  explain->add_flag("--raw", flags.raw, "Skip simplification and minimization");

  std::string onto_path;
  auto* onto = app.add_subcommand("ontology", "Print the augmented IS-A relation");
  onto->add_option("file", onto_path, "Theory file")->required();

  std::string diff_path;
  std::vector<std::uint64_t> random;
  auto* diff = app.add_subcommand("diff-oracle", "Compare the engine with the brute-force oracle");
  auto* diff_file = diff->add_option("file", diff_path, "Theory file");
  auto* diff_random = diff->add_option("--random", random, "SEED COUNT: generated theories")
                          ->expected(2)
                          ->excludes(diff_file);
  diff->callback([&] {
    if (diff_path.empty() && random.empty())
      throw CLI::RequiredError("diff-oracle needs a file or --random SEED COUNT");
  });
  (void)diff_random;

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  std::string where;
  try {
    if (*check) {
      where = check_path;
      return cmd_check(check_path, dump_cnf, out);
    }
    if (*explain) {
      where = flags.path;
      return cmd_explain(flags, out, err, paint);
    }
    if (*onto) {
      where = onto_path;
      return cmd_ontology(onto_path, out);
    }
    if (!diff_path.empty()) {
      where = diff_path;
      return cmd_diff_file(diff_path, out);
    }
    where = "random theories";
    return cmd_diff_random(random[0], random[1], out);
  } catch (const IoFailure& e) {
    err << paint("error", "31") << ": " << e.message << "\n";
    return kIoError;
  } catch (const Error& e) {
    report(err, paint, where, e);
    return exit_code(e.kind());
  }
}

}  // namespace explika
