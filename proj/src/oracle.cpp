#include "explika/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>

#include "explika/parser.hpp"

namespace explika {

namespace {

using Mask = std::uint32_t;

void walk_causal(const Formula& f, std::set<CausalAtom>& out) {
  if (f.kind() == Formula::Kind::Causal) out.insert(f.causal_atom());
  for (const Formula& c : f.children()) walk_causal(c, out);
}

// Atoms one IS-A step away from `a`, in either direction.
std::vector<AtomId> neighbours(const Signature& sig, AtomId a, const OntoLink& link) {
  const GroundAtom atom = sig.atom(a);
  std::vector<AtomId> out;
  if (auto* c = std::get_if<ConstLink>(&link)) {
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      std::vector<ConstantId> args = atom.args;
      if (args[i] == c->sub) args[i] = c->super;
      else if (args[i] == c->super) args[i] = c->sub;
      else continue;
      out.push_back(sig.intern(atom.predicate, args));
    }
    return out;
  }
  PredicateId sub, super;
  if (auto* p = std::get_if<PropLink>(&link)) {
    sub = p->sub;
    super = p->super;
  } else {
    sub = std::get<PredLink>(link).sub;
    super = std::get<PredLink>(link).super;
  }
  if (atom.predicate == sub) out.push_back(sig.intern(super, atom.args));
  if (atom.predicate == super) out.push_back(sig.intern(sub, atom.args));
  return out;
}

// Atoms `a` implies in one lifting step.
std::vector<AtomId> lifts(const Signature& sig, AtomId a, const OntoLink& link) {
  const GroundAtom atom = sig.atom(a);
  std::vector<AtomId> out;
  if (auto* c = std::get_if<ConstLink>(&link)) {
    const auto& modes = sig.predicate(atom.predicate).modes;
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      std::vector<ConstantId> args = atom.args;
      if (modes[i] == ParamMode::One && args[i] == c->sub) args[i] = c->super;
      else if (modes[i] == ParamMode::All && args[i] == c->super) args[i] = c->sub;
      else continue;
      out.push_back(sig.intern(atom.predicate, args));
    }
    return out;
  }
  if (auto* p = std::get_if<PropLink>(&link)) {
    if (atom.predicate == p->sub) out.push_back(sig.intern(p->super, atom.args));
  } else if (auto* q = std::get_if<PredLink>(&link)) {
    if (atom.predicate == q->sub) out.push_back(sig.intern(q->super, atom.args));
  }
  return out;
}

}  // namespace

TripleSet oracle_derive(const Theory& theory, const OracleLimits& limits) {
  const Signature& sig = theory.signature();

  std::set<AtomId> universe;
  for (const Formula& f : theory.background()) f.collect_atoms(universe);
  for (const Formula& f : theory.causal()) f.collect_atoms(universe);
  for (const OntoLink& link : theory.links())
    if (auto* p = std::get_if<PropLink>(&link)) {
      universe.insert(sig.intern(p->sub, {}));
      universe.insert(sig.intern(p->super, {}));
    }
  for (bool grown = true; grown;) {
    grown = false;
    const std::vector<AtomId> snapshot(universe.begin(), universe.end());
    for (AtomId a : snapshot)
      for (const OntoLink& link : theory.links())
        for (AtomId b : neighbours(sig, a, link)) grown |= universe.insert(b).second;
    if (universe.size() > limits.max_universe)
      throw Error(ErrorKind::LimitExceeded,
                  "universe exceeds " + std::to_string(limits.max_universe) + " atoms");
  }

  const std::vector<AtomId> atoms(universe.begin(), universe.end());
  const std::size_t n = atoms.size();
  std::map<AtomId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[atoms[i]] = i;

  // le[i][j]: atoms[i] => atoms[j]
  std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    le[i][i] = 1;
    for (const OntoLink& link : theory.links())
      for (AtomId b : lifts(sig, atoms[i], link)) {
        auto it = index.find(b);
        if (it != index.end()) le[i][it->second] = 1;
      }
  }
  for (bool grown = true; grown;) {
    grown = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (le[i][j])
          for (std::size_t k = 0; k < n; ++k)
            if (le[j][k] && !le[i][k]) le[i][k] = 1, grown = true;
  }

  std::set<CausalAtom> causal_set;
  for (const Formula& f : theory.causal()) walk_causal(f, causal_set);
  const std::vector<CausalAtom> causal(causal_set.begin(), causal_set.end());
  const std::size_t m = causal.size();
  if (n + m > limits.max_variables)
    throw Error(ErrorKind::LimitExceeded,
                "truth table exceeds " + std::to_string(limits.max_variables) + " variables");

  std::set<Mask> models;
  std::vector<char> always(m, 1);
  for (std::uint64_t row = 0; row < (std::uint64_t{1} << n); ++row) {
    bool closed = true;
    for (std::size_t i = 0; closed && i < n; ++i)
      for (std::size_t j = 0; closed && j < n; ++j)
        if (le[i][j] && (row >> i & 1u) && !(row >> j & 1u)) closed = false;
    if (!closed) continue;
    auto atom_bit = [&](AtomId a) { return (row >> index.at(a) & 1u) != 0; };
    for (std::uint64_t crow = 0; crow < (std::uint64_t{1} << m); ++crow) {
      auto causal_bit = [&](std::size_t c) { return (crow >> c & 1u) != 0; };
      bool ok = true;
      for (std::size_t c = 0; ok && c < m; ++c)
        if (causal_bit(c) && atom_bit(causal[c].cause) && !atom_bit(causal[c].effect)) ok = false;
      auto causal_value = [&](CausalAtom c) {
        return causal_bit(std::lower_bound(causal.begin(), causal.end(), c) - causal.begin());
      };
      for (const Formula& f : theory.background())
        if (ok && !f.evaluate(atom_bit, causal_value)) ok = false;
      for (const Formula& f : theory.causal())
        if (ok && !f.evaluate(atom_bit, causal_value)) ok = false;
      if (!ok) continue;
      models.insert(static_cast<Mask>(row));
      for (std::size_t c = 0; c < m; ++c)
        if (!causal_bit(c)) always[c] = 0;
    }
  }
  if (models.empty())
    throw Error(ErrorKind::InconsistentTheory, "the saturated background has no model");

  auto consistent = [&](Mask phi) {
    return std::any_of(models.begin(), models.end(), [&](Mask w) { return (w & phi) == phi; });
  };

  using Raw = std::tuple<std::size_t, std::size_t, Mask>;
  std::set<Raw> raw;
  for (std::size_t c = 0; c < m; ++c) {
    if (!always[c]) continue;
    const std::size_t alpha = index.at(causal[c].cause);
    const std::size_t gamma = index.at(causal[c].effect);
    for (std::size_t beta = 0; beta < n; ++beta)
      for (std::size_t delta = 0; delta < n; ++delta) {
        const Mask phi = Mask{1} << alpha | Mask{1} << beta;
        if (le[beta][gamma] && le[beta][delta] && consistent(phi)) raw.insert({alpha, delta, phi});
      }
  }
  for (bool grown = true; grown;) {
    grown = false;
    const std::vector<Raw> snapshot(raw.begin(), raw.end());
    for (const auto& [a, b, phi] : snapshot)
      for (const auto& [b2, c, psi] : snapshot)
        if (b == b2 && consistent(phi | psi)) grown |= raw.insert({a, c, phi | psi}).second;
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<Mask>> groups;
  for (const auto& [a, b, phi] : raw) {
    if (static_cast<std::size_t>(std::popcount(phi)) > limits.max_proviso)
      throw Error(ErrorKind::LimitExceeded,
                  "proviso exceeds " + std::to_string(limits.max_proviso) + " atoms");
    groups[{a, b}].push_back(phi);
  }

  TripleSet out;
  for (const auto& [key, stored] : groups) {
    // The union of every group of stored supersets is the weakest target, so
    // testing the full group covers every smaller one.
    auto derivable = [&](Mask phi) {
      for (Mask w : models) {
        if ((w & phi) != phi) continue;
        bool hit = std::any_of(stored.begin(), stored.end(), [&](Mask psi) {
          return (psi & phi) == phi && (w & psi) == psi;
        });
        if (!hit) return false;
      }
      return true;
    };
    std::set<Mask> found;
    for (Mask psi : stored)
      for (Mask phi = psi; phi != 0; phi = (phi - 1) & psi)
        if (derivable(phi)) found.insert(phi);
    for (Mask phi : found) {
      bool minimal = std::none_of(found.begin(), found.end(), [&](Mask other) {
        return other != phi && (other & phi) == other;
      });
      if (!minimal) continue;
      Proviso proviso;
      for (std::size_t i = 0; i < n; ++i)
        if (phi >> i & 1u) proviso.push_back(atoms[i]);
      out.insert({atoms[key.first], atoms[key.second], make_proviso(std::move(proviso))});
    }
  }
  return out;
}

TripleSet triples(const ExplanationSet& set) {
  TripleSet out;
  for (const ExplanationAtom& a : set.atoms()) out.insert({a.explanans, a.explanandum, a.proviso});
  return out;
}

OracleDiff compare(const TripleSet& engine, const TripleSet& oracle) {
  OracleDiff diff;
  std::set_difference(engine.begin(), engine.end(), oracle.begin(), oracle.end(),
                      std::back_inserter(diff.engine_only));
  std::set_difference(oracle.begin(), oracle.end(), engine.begin(), engine.end(),
                      std::back_inserter(diff.oracle_only));
  return diff;
}

std::string render_triple(const Triple& t, const Signature& sig) {
  return render_explanation({std::get<0>(t), std::get<1>(t), std::get<2>(t), 0}, sig);
}

// ---------------------------------------------------------------------------

Theory random_theory(std::uint64_t seed, const RandomParams& params) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  TheoryBuilder b;
  if (params.atoms == 0) return b.build();

  const std::size_t nconst = 1 + pick(3);
  std::vector<std::string> constants;
  for (std::size_t i = 0; i < nconst; ++i) constants.push_back("c" + std::to_string(i));

  struct Pred {
    std::string name;
    std::size_t arity;
  };
  std::vector<Pred> preds;
  std::size_t budget = params.atoms;
  const std::size_t wanted = 1 + pick(4);
  for (std::size_t i = 0; i < wanted && budget > 0; ++i) {
    std::size_t arity = pick(3);
    auto cost = [&](std::size_t k) {
      std::size_t c = 1;
      for (std::size_t j = 0; j < k; ++j) c *= nconst;
      return c;
    };
    while (cost(arity) > budget) --arity;
    budget -= cost(arity);
    preds.push_back({"P" + std::to_string(i), arity});
  }

  bool uses_constants = std::any_of(preds.begin(), preds.end(), [](const Pred& p) { return p.arity > 0; });
  if (uses_constants)
    for (const auto& c : constants) b.constant(c);
  for (const Pred& p : preds) {
    std::vector<ParamMode> modes;
    for (std::size_t j = 0; j < p.arity; ++j) modes.push_back(static_cast<ParamMode>(pick(3)));
    b.predicate(p.name, modes);
  }

  std::vector<AtomId> ground;
  for (const Pred& p : preds) {
    std::vector<std::size_t> digits(p.arity, 0);
    for (;;) {
      std::vector<std::string> args;
      for (std::size_t d : digits) args.push_back(constants[d]);
      ground.push_back(b.atom(p.name, args));
      std::size_t j = 0;
      while (j < digits.size() && ++digits[j] == nconst) digits[j++] = 0;
      if (j == digits.size()) break;
    }
  }

  const std::size_t nlinks = pick(params.links + 1);
  for (std::size_t i = 0; i < nlinks; ++i) {
    if (pick(2) == 0 && uses_constants && nconst > 1) {
      std::size_t x = pick(nconst), y = pick(nconst - 1);
      if (y >= x) ++y;
      b.isa(constants[x], constants[y]);
      continue;
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t x = 0; x < preds.size(); ++x)
      for (std::size_t y = 0; y < preds.size(); ++y)
        if (x != y && preds[x].arity == preds[y].arity) pairs.emplace_back(x, y);
    if (pairs.empty()) continue;
    const auto [x, y] = pairs[pick(pairs.size())];
    b.isa(preds[x].name, preds[y].name);
  }

  auto some_atom = [&] { return ground[pick(ground.size())]; };
  auto other_atom = [&](AtomId not_this) {
    if (ground.size() < 2) return not_this;
    AtomId a = some_atom();
    while (a == not_this) a = some_atom();
    return a;
  };
  auto some_causal = [&] {
    const AtomId cause = some_atom();
    return Formula::causal({cause, other_atom(cause)});
  };
  for (std::size_t left = params.causal == 0 ? 0 : 1 + pick(params.causal); left > 0;) {
    if (left >= 2 && pick(5) == 0) {
      Formula first = some_causal();
      b.causal(Formula::disjunction({first, some_causal()}));
      left -= 2;
    } else if (pick(6) == 0) {
      Formula condition = Formula::atom(some_atom());
      b.causal(Formula::implication(condition, some_causal()));
      left -= 1;
    } else {
      const AtomId cause = some_atom();
      b.cause(cause, other_atom(cause));
      left -= 1;
    }
  }

  auto literal = [&] {
    Formula a = Formula::atom(some_atom());
    return pick(3) == 0 ? Formula::negation(a) : a;
  };
  auto formula = [&](auto& self, int depth) -> Formula {
    if (depth == 0) return literal();
    const std::size_t shape = pick(10);
    if (shape < 2) return literal();
    Formula lhs = self(self, depth - 1);
    Formula rhs = self(self, depth - 1);
    if (shape < 6) return Formula::implication(lhs, rhs);
    if (shape < 8) return Formula::disjunction({lhs, rhs});
    if (shape < 9) return Formula::negation(Formula::conjunction({lhs, rhs}));
    return Formula::equivalence(lhs, rhs);
  };
  for (std::size_t i = pick(params.background + 1); i > 0; --i) b.background(formula(formula, 2));
  return b.build();
}

}  // namespace explika
