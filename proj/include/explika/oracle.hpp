#pragma once

// Brute-force reference derivation for small theories, and a generator of
// random small theories to compare it against the engine.

#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "explika/core.hpp"
#include "explika/engine.hpp"
#include "explika/explanation.hpp"

namespace explika {

struct OracleLimits {
  std::size_t max_universe = 12;
  /// Universe atoms plus reified causal atoms; bounds the truth table.
  std::size_t max_variables = 20;
  std::size_t max_proviso = 12;
};

/// (explanans, explanandum, proviso)
using Triple = std::tuple<AtomId, AtomId, Proviso>;
using TripleSet = std::set<Triple>;

/// Throws LimitExceeded past the limits and InconsistentTheory when the
/// saturated background has no model.
TripleSet oracle_derive(const Theory& theory, const OracleLimits& limits = {});

TripleSet triples(const ExplanationSet& set);

struct OracleDiff {
  std::vector<Triple> engine_only;
  std::vector<Triple> oracle_only;

  bool empty() const { return engine_only.empty() && oracle_only.empty(); }
};

OracleDiff compare(const TripleSet& engine, const TripleSet& oracle);
std::string render_triple(const Triple& t, const Signature& sig);

struct RandomParams {
  std::size_t atoms = 8;       // bound on the number of possible ground atoms
  std::size_t causal = 5;      // causal atoms
  std::size_t links = 6;       // IS-A links
  std::size_t background = 4;  // W formulas
};

/// Same seed and parameters, same theory.
Theory random_theory(std::uint64_t seed, const RandomParams& params = {});

}  // namespace explika
