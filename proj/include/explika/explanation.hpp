#pragma once

// Explanation atoms and the derivation steps that justify them.

#include <cstdint>
#include <vector>

#include "explika/core.hpp"

namespace explika {

/// Set of ground atoms, kept sorted by id and duplicate-free.
using Proviso = std::vector<AtomId>;

Proviso make_proviso(std::vector<AtomId> atoms);
Proviso proviso_union(const Proviso& a, const Proviso& b);
bool is_subset(const Proviso& sub, const Proviso& super);
/// Same set, but ordered by rendered atom text.
std::vector<AtomId> sorted_by_text(const Proviso& p, const Signature& sig);

using StepId = std::uint32_t;

enum class Rule { Base, Transitivity, Simplification };

std::string_view to_string(Rule rule);

struct DerivationStep {
  Rule rule = Rule::Base;
  AtomId explanans{};
  AtomId explanandum{};
  Proviso proviso;

  // Base: `causal` is (cause, effect); `lower` sits below both the effect and
  // the explanandum in the augmented ontology.
  CausalAtom causal{};
  AtomId lower{};

  // Transitivity: {left, right}. Simplification: the stored provisos whose
  // disjunction the new proviso entails.
  std::vector<StepId> premises;

  // Simplification only: the background alone entails every atom of the
  // proviso, i.e. the empty proviso would have been licensed. Empty provisos
  // are never emitted; the fact is recorded here instead.
  bool background_entails = false;
};

/// Append-only arena of derivation steps. Premises always precede the steps
/// that use them, so the graph is acyclic by construction.
class DerivationLog {
 public:
  StepId append(DerivationStep step);
  const DerivationStep& step(StepId id) const { return steps_.at(id); }
  std::size_t size() const { return steps_.size(); }

  /// Steps reachable from `root`, premises first.
  std::vector<StepId> linearize(StepId root) const;

 private:
  std::vector<DerivationStep> steps_;
};

struct ExplanationAtom {
  AtomId explanans{};
  AtomId explanandum{};
  Proviso proviso;
  StepId trace = 0;
};

/// Recomputes the atom a step concludes from its rule and premises alone.
/// Throws std::logic_error when the trace does not fit together.
ExplanationAtom replay(const DerivationLog& log, StepId id);

}  // namespace explika
