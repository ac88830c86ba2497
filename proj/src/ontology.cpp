#include "explika/ontology.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace explika {

Reachability::Reachability(std::size_t nodes) : edges_(nodes), up_(nodes), down_(nodes) {
  for (std::uint32_t i = 0; i < nodes; ++i) {
    up_[i] = {i};
    down_[i] = {i};
  }
}

void Reachability::add_edge(std::uint32_t from, std::uint32_t to) {
  edges_.at(from).push_back(to);
  (void)edges_.at(to);
}

void Reachability::close() {
  const std::size_t n = edges_.size();
  for (auto& d : down_) d.clear();
  std::vector<char> seen(n);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < n; ++s) {
    std::fill(seen.begin(), seen.end(), 0);
    auto& reach = up_[s];
    reach.clear();
    stack.assign(1, s);
    seen[s] = 1;
    while (!stack.empty()) {
      const std::uint32_t x = stack.back();
      stack.pop_back();
      reach.push_back(x);
      for (std::uint32_t y : edges_[x])
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
    }
    std::sort(reach.begin(), reach.end());
    for (std::uint32_t t : reach) down_[t].push_back(s);
  }
}

bool Reachability::reaches(std::uint32_t from, std::uint32_t to) const {
  const auto& r = up_.at(from);
  return std::binary_search(r.begin(), r.end(), to);
}

IsaClosure close_isa(const Theory& theory) {
  const Signature& sig = theory.signature();
  IsaClosure out{Reachability(sig.constant_count()), Reachability(sig.predicate_count()),
                 Reachability(sig.predicate_count())};
  for (const OntoLink& link : theory.links()) {
    if (auto* c = std::get_if<ConstLink>(&link))
      out.constants.add_edge(c->sub.value, c->super.value);
    else if (auto* p = std::get_if<PropLink>(&link))
      out.propositions.add_edge(p->sub.value, p->super.value);
    else if (auto* q = std::get_if<PredLink>(&link))
      out.predicates.add_edge(q->sub.value, q->super.value);
  }
  out.constants.close();
  out.propositions.close();
  out.predicates.close();
  return out;
}

namespace {

std::vector<std::uint32_t> related(const Reachability& r, std::uint32_t n) {
  std::vector<std::uint32_t> out(r.up(n).begin(), r.up(n).end());
  out.insert(out.end(), r.down(n).begin(), r.down(n).end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<AtomId> build_universe(const Theory& theory, const IsaClosure& isa) {
  const Signature& sig = theory.signature();
  std::set<AtomId> seen;
  for (const Formula& f : theory.background()) f.collect_atoms(seen);
  for (const Formula& f : theory.causal()) f.collect_atoms(seen);
  for (const OntoLink& link : theory.links())
    if (auto* p = std::get_if<PropLink>(&link)) {
      seen.insert(sig.intern(p->sub, {}));
      seen.insert(sig.intern(p->super, {}));
    }

  std::deque<AtomId> work(seen.begin(), seen.end());
  auto visit = [&](AtomId a) {
    if (seen.insert(a).second) work.push_back(a);
  };
  while (!work.empty()) {
    const GroundAtom atom = sig.atom(work.front());
    work.pop_front();
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      for (std::uint32_t c : related(isa.constants, atom.args[i].value)) {
        std::vector<ConstantId> args = atom.args;
        args[i] = ConstantId{c};
        visit(sig.intern(atom.predicate, args));
      }
    }
    const Reachability& preds = atom.args.empty() ? isa.propositions : isa.predicates;
    for (std::uint32_t q : related(preds, atom.predicate.value))
      visit(sig.intern(PredicateId{q}, atom.args));
  }
  return {seen.begin(), seen.end()};
}

AugmentedOntology augment(const Theory& theory, const IsaClosure& isa,
                          std::span<const AtomId> universe) {
  (void)isa;  // single-step lifts use the user links; the closure is taken over atoms
  const Signature& sig = theory.signature();
  AugmentedOntology out;
  out.universe_.assign(universe.begin(), universe.end());
  std::sort(out.universe_.begin(), out.universe_.end());
  for (std::uint32_t i = 0; i < out.universe_.size(); ++i) out.index_[out.universe_[i]] = i;
  out.relation_ = Reachability(out.universe_.size());

  std::unordered_map<std::uint32_t, std::vector<ConstantId>> supers, subs;
  std::unordered_map<std::uint32_t, std::vector<PredicateId>> pred_supers;
  for (const OntoLink& link : theory.links()) {
    if (auto* c = std::get_if<ConstLink>(&link)) {
      supers[c->sub.value].push_back(c->super);
      subs[c->super.value].push_back(c->sub);
    } else if (auto* p = std::get_if<PropLink>(&link)) {
      pred_supers[p->sub.value].push_back(p->super);
    } else if (auto* q = std::get_if<PredLink>(&link)) {
      pred_supers[q->sub.value].push_back(q->super);
    }
  }

  auto edge = [&](std::uint32_t from, PredicateId pred, const std::vector<ConstantId>& args) {
    auto target = sig.find_atom(pred, args);
    if (!target) return;
    auto it = out.index_.find(*target);
    if (it != out.index_.end()) out.relation_.add_edge(from, it->second);
  };

  for (std::uint32_t i = 0; i < out.universe_.size(); ++i) {
    const GroundAtom atom = sig.atom(out.universe_[i]);
    const PredicateDecl& decl = sig.predicate(atom.predicate);
    for (std::size_t pos = 0; pos < atom.args.size(); ++pos) {
      const auto mode = decl.modes[pos];
      if (mode == ParamMode::NA) continue;
      // One: sub => super, upward. All: super => sub, downward.
      auto& table = mode == ParamMode::One ? supers : subs;
      auto found = table.find(atom.args[pos].value);
      if (found == table.end()) continue;
      for (ConstantId c : found->second) {
        std::vector<ConstantId> args = atom.args;
        args[pos] = c;
        edge(i, atom.predicate, args);
      }
    }
    auto ps = pred_supers.find(atom.predicate.value);
    if (ps != pred_supers.end())
      for (PredicateId q : ps->second) edge(i, q, atom.args);
  }
  out.relation_.close();
  return out;
}

AugmentedOntology build_ontology(const Theory& theory) {
  IsaClosure isa = close_isa(theory);
  std::vector<AtomId> universe = build_universe(theory, isa);
  return augment(theory, isa, universe);
}

bool AugmentedOntology::implies(AtomId sub, AtomId super) const {
  auto a = index_.find(sub);
  auto b = index_.find(super);
  if (a == index_.end() || b == index_.end()) return false;
  return relation_.reaches(a->second, b->second);
}

std::vector<AtomId> AugmentedOntology::above(AtomId atom) const {
  std::vector<AtomId> out;
  auto it = index_.find(atom);
  if (it == index_.end()) return out;
  for (std::uint32_t j : relation_.up(it->second)) out.push_back(universe_[j]);
  return out;
}

std::vector<AtomId> AugmentedOntology::below(AtomId atom) const {
  std::vector<AtomId> out;
  auto it = index_.find(atom);
  if (it == index_.end()) return out;
  for (std::uint32_t j : relation_.down(it->second)) out.push_back(universe_[j]);
  return out;
}

std::vector<std::pair<AtomId, AtomId>> AugmentedOntology::links(bool include_reflexive) const {
  std::vector<std::pair<AtomId, AtomId>> out;
  for (std::uint32_t i = 0; i < universe_.size(); ++i)
    for (std::uint32_t j : relation_.up(i))
      if (include_reflexive || i != j) out.emplace_back(universe_[i], universe_[j]);
  return out;
}

std::vector<Formula> implied_implications(const AugmentedOntology& onto) {
  std::vector<Formula> out;
  for (auto [sub, super] : onto.links())
    out.push_back(Formula::implication(Formula::atom(sub), Formula::atom(super)));
  return out;
}

std::vector<std::string> render_links(const AugmentedOntology& onto, const Signature& sig) {
  std::vector<std::string> out;
  for (auto [sub, super] : onto.links())
    out.push_back(sig.atom_text(sub) + " => " + sig.atom_text(super));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace explika
