#pragma once

// Explanation inference: saturation of W, base case, transitivity,
// simplification of provisos and minimal-proviso filtering.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "explika/core.hpp"
#include "explika/explanation.hpp"
#include "explika/ontology.hpp"
#include "explika/sat.hpp"

namespace explika {

/// W* = W, C, `(a causes b) -> (a -> b)` for every causal atom of C, and
/// `x -> y` for every non-reflexive link of the augmented ontology.
struct SaturatedContext {
  sat::ClauseSet clauses;
  /// Causal atoms of C whose reified variable W* entails, sorted.
  std::vector<CausalAtom> active;
  std::shared_ptr<const AugmentedOntology> ontology;
  std::shared_ptr<const Signature> signature;

  bool consistent(const Proviso& p) const { return sat::consistent_with(clauses, p); }
};

/// Throws InconsistentTheory when W* has no model.
SaturatedContext saturate(const Theory& theory, AugmentedOntology ontology);
SaturatedContext saturate(const Theory& theory);

using ExplanationKey = std::pair<AtomId, AtomId>;  // (explanans, explanandum)

/// Provisos grouped by key; every entry points at the step that derived it.
/// Sets produced from one another share their derivation log.
class ExplanationSet {
 public:
  struct Entry {
    Proviso proviso;
    StepId step = 0;
  };

  ExplanationSet();
  explicit ExplanationSet(std::shared_ptr<DerivationLog> log);

  /// False when the key already holds this proviso.
  bool insert(ExplanationKey key, Proviso proviso, StepId step);
  bool contains(ExplanationKey key, const Proviso& proviso) const;

  const std::map<ExplanationKey, std::vector<Entry>>& groups() const { return groups_; }
  std::size_t size() const;
  bool empty() const { return groups_.empty(); }

  /// Ordered by key ids, then by proviso ids.
  std::vector<ExplanationAtom> atoms() const;

  DerivationLog& log() { return *log_; }
  const DerivationLog& log() const { return *log_; }
  const std::shared_ptr<DerivationLog>& log_ptr() const { return log_; }

  /// Notes left by the pipeline (fallbacks, background-entailed provisos).
  std::vector<std::string> diagnostics;

 private:
  std::shared_ptr<DerivationLog> log_;
  std::map<ExplanationKey, std::vector<Entry>> groups_;
};

struct EngineOptions {
  /// Provisos up to this size are simplified by exhaustive subset search,
  /// larger ones by greedy removal plus intersections of stored provisos.
  std::size_t exhaustive_limit = 16;
};

ExplanationSet base_case(const SaturatedContext& ctx);
ExplanationSet transitivity_closure(const ExplanationSet& base, const SaturatedContext& ctx);
ExplanationSet simplify(const ExplanationSet& closed, const SaturatedContext& ctx,
                        const EngineOptions& options = {});
ExplanationSet minimize(const ExplanationSet& set);

/// Base case, then transitivity, simplification and minimization.
ExplanationSet derive_all(const SaturatedContext& ctx, const EngineOptions& options = {});
ExplanationSet derive_all(const Theory& theory, const EngineOptions& options = {});
/// Base case and transitivity only.
ExplanationSet derive_raw(const SaturatedContext& ctx);

struct QueryOptions {
  std::optional<AtomId> from;
  std::optional<AtomId> to;
  bool raw = false;
  EngineOptions engine;
};

struct QueryResult {
  std::vector<ExplanationAtom> atoms;  // sorted by rendered text
  std::shared_ptr<DerivationLog> log;
  std::vector<std::string> diagnostics;
};

/// Throws UnknownAtom when a filter atom lies outside the universe.
QueryResult explain_query(const Theory& theory, const QueryOptions& options);
QueryResult explain_query(const SaturatedContext& ctx, const QueryOptions& options);

/// Text order: explanans, explanandum, then the proviso as a sorted list of
/// atom texts.
void sort_by_text(std::vector<ExplanationAtom>& atoms, const Signature& sig);

/// Replays the trace of `id` and re-checks every side condition against the
/// context. Throws std::logic_error on the first violation.
void verify_trace(const DerivationLog& log, StepId id, const SaturatedContext& ctx);

}  // namespace explika
