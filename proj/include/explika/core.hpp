#pragma once

// Symbols, ground atoms, formulas and validated causal theories.

#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "explika/error.hpp"

namespace explika {

template <class Tag>
struct Id {
  std::uint32_t value = 0;
  friend auto operator<=>(Id, Id) = default;
};

using PredicateId = Id<struct PredicateTag>;
using ConstantId = Id<struct ConstantTag>;
using AtomId = Id<struct AtomTag>;

enum class ParamMode { One, All, NA };

std::string_view to_string(ParamMode mode);

struct PredicateDecl {
  std::string name;
  std::vector<ParamMode> modes;  // one entry per parameter

  std::size_t arity() const { return modes.size(); }
};

struct GroundAtom {
  PredicateId predicate;
  std::vector<ConstantId> args;

  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
};

/// Symbol tables plus the atom interner.
///
/// Declarations are only added while a theory is being built. Interning stays
/// open afterwards (the grounding universe introduces atoms that occur in no
/// premise) and is safe to call from several threads; an atom keeps its id
/// and its address for the lifetime of the signature.
class Signature {
 public:
  Signature() = default;
  Signature(const Signature&) = delete;
  Signature& operator=(const Signature&) = delete;

  PredicateId declare_predicate(std::string name, std::vector<ParamMode> modes);
  ConstantId declare_constant(std::string name);

  std::optional<PredicateId> find_predicate(std::string_view name) const;
  std::optional<ConstantId> find_constant(std::string_view name) const;

  const PredicateDecl& predicate(PredicateId id) const { return predicates_.at(id.value); }
  const std::string& constant(ConstantId id) const { return constants_.at(id.value); }
  std::size_t predicate_count() const { return predicates_.size(); }
  std::size_t constant_count() const { return constants_.size(); }

  /// Canonical atom for a predicate applied to constants. Throws ArityMismatch.
  AtomId intern(PredicateId predicate, std::span<const ConstantId> args) const;

  /// Name-level interning. Throws UnknownPredicate, ArityMismatch or
  /// UnknownConstant.
  AtomId intern_atom(std::string_view predicate,
                     std::span<const std::string> args) const;

  std::optional<AtomId> find_atom(PredicateId predicate,
                                  std::span<const ConstantId> args) const;

  const GroundAtom& atom(AtomId id) const;
  /// Rendered form, e.g. `Heard(loud_bell)` or `Flu`.
  const std::string& atom_text(AtomId id) const;
  std::size_t atom_count() const;

 private:
  struct AtomRecord {
    GroundAtom atom;
    std::string text;
  };

  std::string render(const GroundAtom& atom) const;

  std::vector<PredicateDecl> predicates_;
  std::vector<std::string> constants_;
  std::unordered_map<std::string, PredicateId> predicate_index_;
  std::unordered_map<std::string, ConstantId> constant_index_;

  mutable std::mutex atom_mutex_;
  mutable std::deque<AtomRecord> atoms_;
  mutable std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>, AtomId> atom_index_;
};

/// `cause causes effect`, with both sides ground atoms.
struct CausalAtom {
  AtomId cause;
  AtomId effect;

  friend auto operator<=>(const CausalAtom&, const CausalAtom&) = default;
};

/// Immutable Boolean formula over ground atoms and (optionally) causal atoms.
/// Nodes are shared, so copies are cheap.
class Formula {
 public:
  enum class Kind { Atom, Causal, Not, And, Or, Implies, Iff };

  static Formula atom(AtomId id);
  static Formula causal(CausalAtom c);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> parts);
  static Formula disjunction(std::vector<Formula> parts);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula equivalence(Formula lhs, Formula rhs);

  Kind kind() const { return node_->kind; }
  AtomId atom_id() const { return node_->atom; }
  CausalAtom causal_atom() const { return node_->causal; }
  std::span<const Formula> children() const { return node_->children; }

  /// True when no causal atom occurs anywhere in the tree.
  bool is_classical() const;
  void collect_atoms(std::set<AtomId>& out) const;
  void collect_causal_atoms(std::vector<CausalAtom>& out) const;

  /// Evaluates under a valuation of atoms and causal atoms.
  bool evaluate(const std::function<bool(AtomId)>& atom_value,
                const std::function<bool(CausalAtom)>& causal_value) const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind = Kind::Atom;
    AtomId atom{};
    CausalAtom causal{};
    std::vector<Formula> children;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct ConstLink {
  ConstantId sub;
  ConstantId super;
  friend auto operator<=>(const ConstLink&, const ConstLink&) = default;
};

/// Link between two arity-0 predicates.
struct PropLink {
  PredicateId sub;
  PredicateId super;
  friend auto operator<=>(const PropLink&, const PropLink&) = default;
};

/// Link between two predicates of equal, non-zero arity.
struct PredLink {
  PredicateId sub;
  PredicateId super;
  friend auto operator<=>(const PredLink&, const PredLink&) = default;
};

using OntoLink = std::variant<ConstLink, PropLink, PredLink>;

/// A validated causal theory: background formulas W, causal formulas C and
/// IS-A links O over a shared signature.
class Theory {
 public:
  const Signature& signature() const { return *signature_; }
  std::shared_ptr<const Signature> signature_ptr() const { return signature_; }

  std::span<const Formula> background() const { return background_; }
  std::span<const Formula> causal() const { return causal_; }
  std::span<const OntoLink> links() const { return links_; }

  /// Distinct causal atoms occurring in C, in order of first occurrence.
  std::vector<CausalAtom> causal_atoms() const;

  /// Copy of this theory with one more background formula.
  Theory with_background(Formula f) const;

 private:
  friend class TheoryBuilder;
  Theory() = default;

  std::shared_ptr<Signature> signature_;
  std::vector<Formula> background_;
  std::vector<Formula> causal_;
  std::vector<OntoLink> links_;
};

/// Programmatic construction of theories; every call validates eagerly.
class TheoryBuilder {
 public:
  TheoryBuilder();

  PredicateId predicate(std::string name, std::vector<ParamMode> modes = {});
  /// Convenience for arity-n predicates whose parameters are all NA.
  PredicateId predicate(std::string name, std::size_t arity);
  ConstantId constant(std::string name);

  AtomId atom(std::string_view predicate, std::vector<std::string> args = {}) const;
  Formula fact(std::string_view predicate, std::vector<std::string> args = {}) const {
    return Formula::atom(atom(predicate, std::move(args)));
  }

  TheoryBuilder& background(Formula f);
  TheoryBuilder& causal(Formula f);
  TheoryBuilder& cause(AtomId cause, AtomId effect);
  /// `sub IS-A super`; kind resolved from the symbol table.
  TheoryBuilder& isa(std::string_view sub, std::string_view super,
                     std::optional<SourceSpan> span = std::nullopt);

  const Signature& signature() const { return *theory_.signature_; }
  Theory build() const { return theory_; }

 private:
  void check_formula(const Formula& f) const;

  Theory theory_;
};

// ---------------------------------------------------------------------------
// Name-level ("raw") theories, as produced by the parser before resolution.

struct RawAtom {
  std::string predicate;
  std::vector<std::string> args;
  std::optional<SourceSpan> span;
};

struct RawFormula {
  Formula::Kind kind = Formula::Kind::Atom;
  RawAtom atom;    // Atom, and cause side of Causal
  RawAtom effect;  // Causal only
  std::vector<RawFormula> children;
  std::optional<SourceSpan> span;
};

struct RawPredicate {
  std::string name;
  std::vector<ParamMode> modes;
  std::optional<SourceSpan> span;
};

struct RawConstant {
  std::string name;
  std::optional<SourceSpan> span;
};

struct RawLink {
  std::string sub;
  std::string super;
  std::optional<SourceSpan> span;
};

struct RawTheory {
  std::vector<RawPredicate> predicates;
  std::vector<RawConstant> constants;
  std::vector<RawLink> links;
  /// Facts and causal statements, in source order. Formulas mentioning a
  /// causal atom go to C, the others to W.
  std::vector<RawFormula> formulas;
};

Theory validate_theory(const RawTheory& raw);

}  // namespace explika

template <class Tag>
struct std::hash<explika::Id<Tag>> {
  std::size_t operator()(explika::Id<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
