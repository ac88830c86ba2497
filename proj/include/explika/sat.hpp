#pragma once

// Propositional satisfiability and entailment over ground atoms.
//
// Causal atoms occurring inside formulas are reified as ordinary variables, so
// a Boolean combination of causal atoms is just another propositional formula
// here. Everything is deterministic: DPLL with unit propagation and
// pure-literal elimination, branching on the lowest unassigned variable,
// positive phase first.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "explika/core.hpp"

namespace explika::sat {

struct Lit {
  std::uint32_t code = 0;  // 2 * var + negated

  static Lit positive(std::uint32_t var) { return Lit{var << 1}; }
  static Lit negative(std::uint32_t var) { return Lit{(var << 1) | 1u}; }

  std::uint32_t var() const { return code >> 1; }
  bool negated() const { return code & 1u; }
  Lit operator~() const { return Lit{code ^ 1u}; }

  friend auto operator<=>(Lit, Lit) = default;
};

using Clause = std::vector<Lit>;

enum class VarOrigin { Atom, Causal, Aux };

struct PropVar {
  std::uint32_t index = 0;
  VarOrigin origin = VarOrigin::Aux;
  AtomId atom{};        // origin == Atom
  CausalAtom causal{};  // origin == Causal
};

/// Clauses plus the table mapping variables back to atoms / causal atoms.
class ClauseSet {
 public:
  std::uint32_t var_for(AtomId atom);
  std::uint32_t var_for(CausalAtom causal);
  std::uint32_t fresh_aux();

  std::optional<std::uint32_t> find_var(AtomId atom) const;
  std::optional<std::uint32_t> find_var(CausalAtom causal) const;

  /// Adds a clause after dropping duplicate literals; tautologies are
  /// discarded.
  void add_clause(Clause clause);
  /// Encodes `f` with auxiliary variables only where a subformula is not
  /// already clausal.
  void add_formula(const Formula& f);

  std::span<const Clause> clauses() const { return clauses_; }
  std::span<const PropVar> vars() const { return vars_; }
  std::size_t var_count() const { return vars_.size(); }

  /// DIMACS text, preceded by the variable table as comment lines.
  std::string dimacs(const Signature& sig) const;

 private:
  std::vector<Clause> clauses_;
  std::vector<PropVar> vars_;
  std::map<AtomId, std::uint32_t> atom_vars_;
  std::map<CausalAtom, std::uint32_t> causal_vars_;
};

ClauseSet to_cnf(std::span<const Formula> formulas);

/// Literal of an atom, creating an unconstrained variable when needed.
Lit literal(ClauseSet& cs, AtomId atom, bool positive = true);

/// True iff the clauses, the extra clauses and the assumption literals have a
/// common model.
bool satisfiable(const ClauseSet& cs, std::span<const Lit> assumptions = {},
                 std::span<const Clause> extra = {});

/// clauses |= f
bool entails(const ClauseSet& cs, const Formula& f);

/// clauses & (conjunction of atoms) is satisfiable. Atoms unknown to the
/// clause set are unconstrained.
bool consistent_with(const ClauseSet& cs, std::span<const AtomId> atoms);

/// clauses |= (conjunction of `premise`) -> OR_i (conjunction of `options[i]`).
/// An empty option list makes the right-hand side false.
bool entails_cover(const ClauseSet& cs, std::span<const AtomId> premise,
                   std::span<const std::vector<AtomId>> options);

}  // namespace explika::sat
