#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "explika/engine.hpp"
#include "explika/parser.hpp"

namespace testing {

inline std::string theory_path(const std::string& name) {
  return std::string(EXPLIKA_THEORY_DIR) + "/" + name + ".cet";
}

inline std::string read_theory(const std::string& name) {
  std::ifstream in(theory_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline explika::Theory load(const std::string& name) { return explika::parse_theory(read_theory(name)); }

inline std::set<std::string> lines(const std::vector<explika::ExplanationAtom>& atoms,
                                   const explika::Signature& sig) {
  std::set<std::string> out;
  for (const auto& a : atoms) out.insert(explika::render_explanation(a, sig));
  return out;
}

inline std::set<std::string> derive_lines(const explika::Theory& t) {
  return lines(explika::derive_all(t).atoms(), t.signature());
}

/// Rendered atoms for one (explanans, explanandum) pair.
inline std::set<std::string> between(const explika::Theory& t, const std::string& from,
                                     const std::string& to, bool raw = false) {
  explika::QueryOptions q;
  q.from = explika::parse_atom(from, t);
  q.to = explika::parse_atom(to, t);
  q.raw = raw;
  return lines(explika::explain_query(t, q).atoms, t.signature());
}

}  // namespace testing
