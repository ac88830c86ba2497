#pragma once

// IS-A closures and the augmented relation `=>` over ground atoms.

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "explika/core.hpp"

namespace explika {

/// Reflexive-transitive closure of a directed graph on nodes 0..n-1, stored
/// as sorted reachability lists in both directions.
class Reachability {
 public:
  explicit Reachability(std::size_t nodes = 0);

  void add_edge(std::uint32_t from, std::uint32_t to);
  /// Computes the closure; edges added afterwards require another call.
  void close();

  std::size_t size() const { return edges_.size(); }
  bool reaches(std::uint32_t from, std::uint32_t to) const;
  /// Every node reachable from `n`, including `n`.
  std::span<const std::uint32_t> up(std::uint32_t n) const { return up_.at(n); }
  /// Every node that reaches `n`, including `n`.
  std::span<const std::uint32_t> down(std::uint32_t n) const { return down_.at(n); }

 private:
  std::vector<std::vector<std::uint32_t>> edges_;
  std::vector<std::vector<std::uint32_t>> up_;
  std::vector<std::vector<std::uint32_t>> down_;
};

/// User-level IS-A, closed per symbol kind. `propositions` and `predicates`
/// are both indexed by PredicateId; the first holds links between arity-0
/// predicates, the second links between predicates of higher arity.
struct IsaClosure {
  Reachability constants;
  Reachability propositions;
  Reachability predicates;
};

IsaClosure close_isa(const Theory& theory);

/// Ground atoms of W and C plus the endpoints of propositional links, closed
/// under swapping one argument for an IS-A-related constant (either
/// direction) and under swapping the predicate for a related one. Sorted by
/// id.
std::vector<AtomId> build_universe(const Theory& theory, const IsaClosure& isa);

class AugmentedOntology {
 public:
  AugmentedOntology() = default;

  std::span<const AtomId> universe() const { return universe_; }
  bool contains(AtomId atom) const { return index_.count(atom) > 0; }

  /// sub => super (reflexive, so implies(x, x) holds for universe members).
  bool implies(AtomId sub, AtomId super) const;
  std::vector<AtomId> above(AtomId atom) const;
  std::vector<AtomId> below(AtomId atom) const;

  /// Every pair (sub, super) with sub => super, ordered by ids.
  std::vector<std::pair<AtomId, AtomId>> links(bool include_reflexive = false) const;

 private:
  friend AugmentedOntology augment(const Theory&, const IsaClosure&, std::span<const AtomId>);

  std::vector<AtomId> universe_;
  std::unordered_map<AtomId, std::uint32_t> index_;
  Reachability relation_;
};

AugmentedOntology augment(const Theory& theory, const IsaClosure& isa,
                          std::span<const AtomId> universe);

/// close_isa, build_universe and augment in one go.
AugmentedOntology build_ontology(const Theory& theory);

/// One implication `sub -> super` per non-reflexive link.
std::vector<Formula> implied_implications(const AugmentedOntology& onto);

/// `A => B` lines, reflexive pairs suppressed, sorted by text.
std::vector<std::string> render_links(const AugmentedOntology& onto, const Signature& sig);

}  // namespace explika
