#include "explika/sat.hpp"

#include <algorithm>
#include <sstream>

namespace explika::sat {

// ---------------------------------------------------------------------------
// Variable table

std::uint32_t ClauseSet::var_for(AtomId atom) {
  auto it = atom_vars_.find(atom);
  if (it != atom_vars_.end()) return it->second;
  const auto v = static_cast<std::uint32_t>(vars_.size());
  vars_.push_back(PropVar{v, VarOrigin::Atom, atom, {}});
  atom_vars_.emplace(atom, v);
  return v;
}

std::uint32_t ClauseSet::var_for(CausalAtom causal) {
  auto it = causal_vars_.find(causal);
  if (it != causal_vars_.end()) return it->second;
  const auto v = static_cast<std::uint32_t>(vars_.size());
  vars_.push_back(PropVar{v, VarOrigin::Causal, {}, causal});
  causal_vars_.emplace(causal, v);
  return v;
}

std::uint32_t ClauseSet::fresh_aux() {
  const auto v = static_cast<std::uint32_t>(vars_.size());
  vars_.push_back(PropVar{v, VarOrigin::Aux, {}, {}});
  return v;
}

std::optional<std::uint32_t> ClauseSet::find_var(AtomId atom) const {
  auto it = atom_vars_.find(atom);
  if (it == atom_vars_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> ClauseSet::find_var(CausalAtom causal) const {
  auto it = causal_vars_.find(causal);
  if (it == causal_vars_.end()) return std::nullopt;
  return it->second;
}

void ClauseSet::add_clause(Clause clause) {
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 1; i < clause.size(); ++i)
    if (clause[i].var() == clause[i - 1].var()) return;  // x | !x
  clauses_.push_back(std::move(clause));
}

// ---------------------------------------------------------------------------
// CNF conversion

namespace {

using Kind = Formula::Kind;

class Encoder {
 public:
  explicit Encoder(ClauseSet& cs) : cs_(cs) {}

  /// Clauses equivalent to f (or to !f when `negate`).
  std::vector<Clause> clauses(const Formula& f, bool negate) {
    auto kids = f.children();
    switch (f.kind()) {
      case Kind::Atom:
      case Kind::Causal: return {{leaf(f, negate)}};
      case Kind::Not: return clauses(kids[0], !negate);
      case Kind::And:
        if (!negate) return conjoin(kids, false);
        return disjoin(kids, true);
      case Kind::Or:
        if (!negate) return disjoin(kids, false);
        return conjoin(kids, true);
      case Kind::Implies:
        if (!negate) return disjoin({{kids[0], true}, {kids[1], false}});
        {
          auto out = clauses(kids[0], false);
          auto rhs = clauses(kids[1], true);
          out.insert(out.end(), rhs.begin(), rhs.end());
          return out;
        }
      case Kind::Iff: {
        const Lit a = literal(kids[0], false);
        const Lit b = literal(kids[1], negate);
        return {{~a, b}, {a, ~b}};
      }
    }
    return {};
  }

  /// A literal equivalent to f (or !f), introducing an auxiliary variable for
  /// anything that is not a literal already.
  Lit literal(const Formula& f, bool negate) {
    if (f.kind() == Kind::Atom || f.kind() == Kind::Causal) return leaf(f, negate);
    if (f.kind() == Kind::Not) return literal(f.children()[0], !negate);
    const Lit x = Lit::positive(cs_.fresh_aux());
    for (Clause c : clauses(f, false)) {
      c.push_back(~x);
      cs_.add_clause(std::move(c));
    }
    for (Clause c : clauses(f, true)) {
      c.push_back(x);
      cs_.add_clause(std::move(c));
    }
    return negate ? ~x : x;
  }

 private:
  Lit leaf(const Formula& f, bool negate) {
    const std::uint32_t v =
        f.kind() == Kind::Atom ? cs_.var_for(f.atom_id()) : cs_.var_for(f.causal_atom());
    return negate ? Lit::negative(v) : Lit::positive(v);
  }

  /// Whether f (or !f) is a plain disjunction of literals.
  static bool clausal(const Formula& f, bool negate) {
    auto kids = f.children();
    switch (f.kind()) {
      case Kind::Atom:
      case Kind::Causal: return true;
      case Kind::Not: return clausal(kids[0], !negate);
      case Kind::And:
        if (negate)
          return std::all_of(kids.begin(), kids.end(),
                             [](const Formula& k) { return clausal(k, true); });
        return kids.size() == 1 && clausal(kids[0], false);
      case Kind::Or:
        if (!negate)
          return std::all_of(kids.begin(), kids.end(),
                             [](const Formula& k) { return clausal(k, false); });
        return kids.size() == 1 && clausal(kids[0], true);
      case Kind::Implies: return !negate && clausal(kids[0], true) && clausal(kids[1], false);
      case Kind::Iff: return false;
    }
    return false;
  }

  std::vector<Clause> conjoin(std::span<const Formula> kids, bool negate) {
    std::vector<Clause> out;
    for (const Formula& k : kids) {
      auto part = clauses(k, negate);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }

  std::vector<Clause> disjoin(std::span<const Formula> kids, bool negate) {
    std::vector<std::pair<Formula, bool>> parts;
    for (const Formula& k : kids) parts.emplace_back(k, negate);
    return disjoin(parts);
  }

  std::vector<Clause> disjoin(const std::vector<std::pair<Formula, bool>>& parts) {
    Clause merged;
    for (const auto& [f, negate] : parts) {
      if (clausal(f, negate)) {
        auto cs = clauses(f, negate);
        for (Lit l : cs.at(0)) merged.push_back(l);
      } else {
        merged.push_back(literal(f, negate));
      }
    }
    return {merged};
  }

  ClauseSet& cs_;
};

}  // namespace

void ClauseSet::add_formula(const Formula& f) {
  Encoder enc(*this);
  for (Clause c : enc.clauses(f, false)) add_clause(std::move(c));
}

ClauseSet to_cnf(std::span<const Formula> formulas) {
  ClauseSet cs;
  for (const Formula& f : formulas) cs.add_formula(f);
  return cs;
}

Lit literal(ClauseSet& cs, AtomId atom, bool positive) {
  const std::uint32_t v = cs.var_for(atom);
  return positive ? Lit::positive(v) : Lit::negative(v);
}

std::string ClauseSet::dimacs(const Signature& sig) const {
  std::ostringstream out;
  for (const PropVar& v : vars_) {
    out << "c " << (v.index + 1) << ' ';
    switch (v.origin) {
      case VarOrigin::Atom: out << sig.atom_text(v.atom); break;
      case VarOrigin::Causal:
        out << "(" << sig.atom_text(v.causal.cause) << " => " << sig.atom_text(v.causal.effect)
            << ")";
        break;
      case VarOrigin::Aux: out << "aux"; break;
    }
    out << '\n';
  }
  out << "p cnf " << vars_.size() << ' ' << clauses_.size() << '\n';
  for (const Clause& c : clauses_) {
    for (Lit l : c) out << (l.negated() ? "-" : "") << (l.var() + 1) << ' ';
    out << "0\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// DPLL

namespace {

constexpr std::int8_t kUnset = -1;

class Dpll {
 public:
  Dpll(std::span<const Clause> base, std::span<const Clause> extra, std::size_t var_count) {
    clauses_.reserve(base.size() + extra.size());
    for (const Clause& c : base) clauses_.push_back(&c);
    for (const Clause& c : extra) clauses_.push_back(&c);
    for (const Clause* c : clauses_)
      for (Lit l : *c) var_count = std::max<std::size_t>(var_count, l.var() + 1);
    var_count_ = var_count;
  }

  bool solve(std::span<const Lit> assumptions) {
    std::vector<std::int8_t> value(var_count_, kUnset);
    for (Lit l : assumptions) {
      if (l.var() >= var_count_) continue;  // unconstrained variable
      const std::int8_t want = l.negated() ? 0 : 1;
      if (value[l.var()] != kUnset && value[l.var()] != want) return false;
      value[l.var()] = want;
    }
    return search(std::move(value));
  }

 private:
  static bool is_true(const std::vector<std::int8_t>& v, Lit l) {
    return v[l.var()] == (l.negated() ? 0 : 1);
  }

  bool search(std::vector<std::int8_t> value) {
    std::vector<std::uint8_t> polarity(var_count_);
    for (;;) {
      // Unit propagation to a fixpoint.
      for (bool changed = true; changed;) {
        changed = false;
        for (const Clause* c : clauses_) {
          std::size_t open = 0;
          Lit last{};
          bool sat = false;
          for (Lit l : *c) {
            if (value[l.var()] == kUnset) {
              ++open;
              last = l;
            } else if (is_true(value, l)) {
              sat = true;
              break;
            }
          }
          if (sat) continue;
          if (open == 0) return false;
          if (open == 1) {
            value[last.var()] = last.negated() ? 0 : 1;
            changed = true;
          }
        }
      }

      // Pure literals among the still-open clauses.
      std::fill(polarity.begin(), polarity.end(), 0);
      bool all_sat = true;
      for (const Clause* c : clauses_) {
        if (std::any_of(c->begin(), c->end(), [&](Lit l) { return is_true(value, l); })) continue;
        all_sat = false;
        for (Lit l : *c)
          if (value[l.var()] == kUnset) polarity[l.var()] |= l.negated() ? 2 : 1;
      }
      if (all_sat) return true;
      bool assigned = false;
      for (std::size_t v = 0; v < var_count_; ++v) {
        if (polarity[v] == 1) value[v] = 1;
        if (polarity[v] == 2) value[v] = 0;
        assigned |= polarity[v] == 1 || polarity[v] == 2;
      }
      if (assigned) continue;

      // Branch on the lowest variable still open in some clause.
      std::size_t branch = var_count_;
      for (std::size_t v = 0; v < var_count_; ++v)
        if (polarity[v] != 0) {
          branch = v;
          break;
        }
      if (branch == var_count_) return true;
      std::vector<std::int8_t> positive = value;
      positive[branch] = 1;
      if (search(std::move(positive))) return true;
      value[branch] = 0;
      return search(std::move(value));
    }
  }

  std::vector<const Clause*> clauses_;
  std::size_t var_count_ = 0;
};

/// Maps atoms to literals without touching the clause set; atoms it does not
/// know get private variables past the end of its table.
class AtomLits {
 public:
  explicit AtomLits(const ClauseSet& cs) : cs_(cs), next_(static_cast<std::uint32_t>(cs.var_count())) {}

  Lit operator()(AtomId atom, bool positive = true) {
    std::uint32_t v;
    if (auto known = cs_.find_var(atom)) {
      v = *known;
    } else {
      auto [it, inserted] = overflow_.try_emplace(atom, next_);
      if (inserted) ++next_;
      v = it->second;
    }
    return positive ? Lit::positive(v) : Lit::negative(v);
  }

  std::size_t var_count() const { return next_; }

 private:
  const ClauseSet& cs_;
  std::uint32_t next_;
  std::map<AtomId, std::uint32_t> overflow_;
};

}  // namespace

bool satisfiable(const ClauseSet& cs, std::span<const Lit> assumptions,
                 std::span<const Clause> extra) {
  return Dpll(cs.clauses(), extra, cs.var_count()).solve(assumptions);
}

bool entails(const ClauseSet& cs, const Formula& f) {
  ClauseSet copy = cs;
  copy.add_formula(Formula::negation(f));
  return !satisfiable(copy);
}

bool consistent_with(const ClauseSet& cs, std::span<const AtomId> atoms) {
  AtomLits lits(cs);
  std::vector<Lit> assumptions;
  for (AtomId a : atoms) assumptions.push_back(lits(a));
  return Dpll(cs.clauses(), {}, lits.var_count()).solve(assumptions);
}

bool entails_cover(const ClauseSet& cs, std::span<const AtomId> premise,
                   std::span<const std::vector<AtomId>> options) {
  AtomLits lits(cs);
  std::vector<Lit> assumptions;
  for (AtomId a : premise) assumptions.push_back(lits(a));
  std::vector<Clause> blocked;
  for (const auto& option : options) {
    Clause c;
    for (AtomId a : option) c.push_back(lits(a, false));
    blocked.push_back(std::move(c));
  }
  return !Dpll(cs.clauses(), blocked, lits.var_count()).solve(assumptions);
}

}  // namespace explika::sat
