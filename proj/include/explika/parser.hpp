#pragma once

// Text frontend for theory files (`.cet`) and the matching renderers.
//
//   pred Heard/1(one), On/1, Wake_up/0.
//   const alarm, loud_bell, warning_signal.
//   isa loud_bell -> warning_signal.
//   cause On(alarm) => Heard(warning_signal).
//   fact !(Heard(loud_bell) & Wake_up) | (On(alarm) => Wake_up).
//
// Connectives by decreasing precedence: ! & | -> <->; `->` associates to the
// right. `#` starts a comment.

#include <string>
#include <string_view>

#include "explika/core.hpp"
#include "explika/explanation.hpp"

namespace explika {

RawTheory parse_raw_theory(std::string_view text);

/// Parses and validates. Errors carry the span of the offending construct.
Theory parse_theory(std::string_view text);

/// Parses a single ground atom against the theory's signature.
AtomId parse_atom(std::string_view text, const Theory& theory);

std::string render_formula(const Formula& f, const Signature& sig);
std::string render_theory(const Theory& theory);
/// `A explains B because_possible {P1, P2}` with the proviso in text order.
std::string render_explanation(const ExplanationAtom& atom, const Signature& sig);
std::string render_proviso(const Proviso& p, const Signature& sig);

}  // namespace explika
