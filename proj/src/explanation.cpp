#include "explika/explanation.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace explika {

Proviso make_proviso(std::vector<AtomId> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

Proviso proviso_union(const Proviso& a, const Proviso& b) {
  Proviso out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const Proviso& sub, const Proviso& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

std::vector<AtomId> sorted_by_text(const Proviso& p, const Signature& sig) {
  std::vector<AtomId> out(p.begin(), p.end());
  std::sort(out.begin(), out.end(),
            [&](AtomId a, AtomId b) { return sig.atom_text(a) < sig.atom_text(b); });
  return out;
}

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::Base: return "base";
    case Rule::Transitivity: return "transitivity";
    case Rule::Simplification: return "simplification";
  }
  return "?";
}

StepId DerivationLog::append(DerivationStep step) {
  const auto id = static_cast<StepId>(steps_.size());
  for (StepId p : step.premises)
    if (p >= id) throw std::logic_error("derivation premise does not precede its conclusion");
  steps_.push_back(std::move(step));
  return id;
}

std::vector<StepId> DerivationLog::linearize(StepId root) const {
  std::vector<StepId> order;
  std::vector<bool> seen(steps_.size(), false);
  std::function<void(StepId)> visit = [&](StepId id) {
    if (seen.at(id)) return;
    seen[id] = true;
    for (StepId p : steps_[id].premises) visit(p);
    order.push_back(id);
  };
  visit(root);
  return order;
}

namespace {

// Premises are looked up in `done`, which holds every step replayed so far.
ExplanationAtom recompute(const DerivationLog& log, StepId id,
                          const std::unordered_map<StepId, ExplanationAtom>& done) {
  const DerivationStep& s = log.step(id);
  switch (s.rule) {
    case Rule::Base:
      if (!s.premises.empty()) throw std::logic_error("base step with premises");
      return {s.causal.cause, s.explanandum, make_proviso({s.causal.cause, s.lower}), id};
    case Rule::Transitivity: {
      if (s.premises.size() != 2) throw std::logic_error("transitivity needs two premises");
      const ExplanationAtom& left = done.at(s.premises[0]);
      const ExplanationAtom& right = done.at(s.premises[1]);
      if (left.explanandum != right.explanans)
        throw std::logic_error("transitivity premises do not chain");
      return {left.explanans, right.explanandum, proviso_union(left.proviso, right.proviso), id};
    }
    case Rule::Simplification: {
      if (s.premises.empty()) throw std::logic_error("simplification without sources");
      if (s.proviso.empty()) throw std::logic_error("empty proviso");
      for (StepId p : s.premises) {
        const ExplanationAtom& src = done.at(p);
        if (src.explanans != s.explanans || src.explanandum != s.explanandum)
          throw std::logic_error("simplification source has another key");
        if (!is_subset(s.proviso, src.proviso))
          throw std::logic_error("simplified proviso is not a subset of its source");
      }
      return {s.explanans, s.explanandum, s.proviso, id};
    }
  }
  throw std::logic_error("unknown rule");
}

}  // namespace

ExplanationAtom replay(const DerivationLog& log, StepId id) {
  std::unordered_map<StepId, ExplanationAtom> done;
  for (StepId s : log.linearize(id)) {
    ExplanationAtom atom = recompute(log, s, done);
    const DerivationStep& step = log.step(s);
    if (atom.explanans != step.explanans || atom.explanandum != step.explanandum ||
        atom.proviso != step.proviso)
      throw std::logic_error("derivation step does not reconstruct its atom");
    done.emplace(s, std::move(atom));
  }
  return done.at(id);
}

}  // namespace explika
