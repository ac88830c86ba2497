#include "explika/engine.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace explika {

SaturatedContext saturate(const Theory& theory, AugmentedOntology ontology) {
  SaturatedContext ctx;
  ctx.signature = theory.signature_ptr();
  ctx.ontology = std::make_shared<const AugmentedOntology>(std::move(ontology));
  sat::ClauseSet& cs = ctx.clauses;

  for (AtomId a : ctx.ontology->universe()) cs.var_for(a);
  for (const Formula& f : theory.background()) cs.add_formula(f);
  for (const Formula& f : theory.causal()) cs.add_formula(f);

  const std::vector<CausalAtom> causal = theory.causal_atoms();
  for (const CausalAtom& c : causal) {
    const std::uint32_t v = cs.var_for(c);
    cs.add_clause({sat::Lit::negative(v), sat::Lit::negative(cs.var_for(c.cause)),
                   sat::Lit::positive(cs.var_for(c.effect))});
  }
  for (const Formula& f : implied_implications(*ctx.ontology)) cs.add_formula(f);

  if (!sat::satisfiable(cs))
    throw Error(ErrorKind::InconsistentTheory, "the saturated background has no model");

  for (const CausalAtom& c : causal) {
    const sat::Lit off = sat::Lit::negative(*cs.find_var(c));
    if (!sat::satisfiable(cs, std::span(&off, 1))) ctx.active.push_back(c);
  }
  std::sort(ctx.active.begin(), ctx.active.end());
  return ctx;
}

SaturatedContext saturate(const Theory& theory) { return saturate(theory, build_ontology(theory)); }

// ---------------------------------------------------------------------------

ExplanationSet::ExplanationSet() : log_(std::make_shared<DerivationLog>()) {}

ExplanationSet::ExplanationSet(std::shared_ptr<DerivationLog> log) : log_(std::move(log)) {}

bool ExplanationSet::insert(ExplanationKey key, Proviso proviso, StepId step) {
  auto& group = groups_[key];
  for (const Entry& e : group)
    if (e.proviso == proviso) return false;
  group.push_back({std::move(proviso), step});
  return true;
}

bool ExplanationSet::contains(ExplanationKey key, const Proviso& proviso) const {
  auto it = groups_.find(key);
  if (it == groups_.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(),
                     [&](const Entry& e) { return e.proviso == proviso; });
}

std::size_t ExplanationSet::size() const {
  std::size_t n = 0;
  for (const auto& [key, group] : groups_) n += group.size();
  return n;
}

std::vector<ExplanationAtom> ExplanationSet::atoms() const {
  std::vector<ExplanationAtom> out;
  for (const auto& [key, group] : groups_) {
    const std::size_t first = out.size();
    for (const Entry& e : group) out.push_back({key.first, key.second, e.proviso, e.step});
    std::sort(out.begin() + first, out.end(),
              [](const ExplanationAtom& a, const ExplanationAtom& b) { return a.proviso < b.proviso; });
  }
  return out;
}

// ---------------------------------------------------------------------------

ExplanationSet base_case(const SaturatedContext& ctx) {
  ExplanationSet out;
  const AugmentedOntology& onto = *ctx.ontology;
  for (const CausalAtom& c : ctx.active) {
    for (AtomId beta : onto.below(c.effect)) {
      Proviso proviso = make_proviso({c.cause, beta});
      if (!ctx.consistent(proviso)) continue;
      for (AtomId delta : onto.above(beta)) {
        if (out.contains({c.cause, delta}, proviso)) continue;
        DerivationStep step;
        step.rule = Rule::Base;
        step.explanans = c.cause;
        step.explanandum = delta;
        step.proviso = proviso;
        step.causal = c;
        step.lower = beta;
        const StepId id = out.log().append(std::move(step));
        out.insert({c.cause, delta}, proviso, id);
      }
    }
  }
  return out;
}

ExplanationSet transitivity_closure(const ExplanationSet& base, const SaturatedContext& ctx) {
  struct Item {
    ExplanationKey key;
    Proviso proviso;
    StepId step;
  };
  ExplanationSet out(base.log_ptr());
  out.diagnostics = base.diagnostics;
  std::vector<Item> items;
  std::unordered_map<AtomId, std::vector<std::size_t>> by_explanans, by_explanandum;
  std::deque<std::size_t> work;
  std::map<Proviso, bool> consistency;

  auto add = [&](ExplanationKey key, Proviso proviso, StepId step) {
    if (!out.insert(key, proviso, step)) return;
    items.push_back({key, std::move(proviso), step});
    by_explanans[key.first].push_back(items.size() - 1);
    by_explanandum[key.second].push_back(items.size() - 1);
    work.push_back(items.size() - 1);
  };
  auto consistent = [&](const Proviso& p) {
    auto [it, fresh] = consistency.try_emplace(p, false);
    if (fresh) it->second = ctx.consistent(p);
    return it->second;
  };
  auto chain = [&](const Item& left, const Item& right) {
    Proviso joined = proviso_union(left.proviso, right.proviso);
    const ExplanationKey key{left.key.first, right.key.second};
    if (out.contains(key, joined) || !consistent(joined)) return;
    DerivationStep step;
    step.rule = Rule::Transitivity;
    step.explanans = key.first;
    step.explanandum = key.second;
    step.proviso = joined;
    step.premises = {left.step, right.step};
    const StepId id = out.log().append(std::move(step));
    add(key, std::move(joined), id);
  };

  for (const auto& [key, group] : base.groups())
    for (const auto& e : group) add(key, e.proviso, e.step);

  while (!work.empty()) {
    const Item item = items[work.front()];
    work.pop_front();
    // The index vectors may grow while we chain, so iterate over snapshots.
    const std::vector<std::size_t> right = by_explanans[item.key.second];
    for (std::size_t j : right) chain(item, Item(items[j]));
    const std::vector<std::size_t> left = by_explanandum[item.key.first];
    for (std::size_t j : left) chain(Item(items[j]), item);
  }
  return out;
}

namespace {

struct SimplifyOutcome {
  std::vector<Proviso> provisos;
  std::vector<std::vector<StepId>> sources;
};

std::vector<StepId> supersets_of(const Proviso& p, const std::vector<ExplanationSet::Entry>& group,
                                 std::vector<Proviso>* provisos = nullptr) {
  std::vector<StepId> steps;
  for (const auto& e : group)
    if (is_subset(p, e.proviso)) {
      steps.push_back(e.step);
      if (provisos) provisos->push_back(e.proviso);
    }
  return steps;
}

bool covered(const SaturatedContext& ctx, const Proviso& p,
             const std::vector<ExplanationSet::Entry>& group) {
  std::vector<Proviso> options;
  supersets_of(p, group, &options);
  return sat::entails_cover(ctx.clauses, p, options);
}

// Every subset-minimal non-empty Φ inside some stored proviso such that W*
// entails Φ -> the disjunction of the stored provisos containing Φ.
SimplifyOutcome exhaustive(const SaturatedContext& ctx,
                           const std::vector<ExplanationSet::Entry>& group) {
  SimplifyOutcome out;
  std::size_t widest = 0;
  for (const auto& e : group) widest = std::max(widest, e.proviso.size());

  for (std::size_t k = 1; k <= widest; ++k) {
    std::set<Proviso> candidates;
    for (const auto& e : group) {
      const std::size_t n = e.proviso.size();
      if (n < k) continue;
      // Gosper's hack over the k-element subsets of this proviso.
      std::uint64_t mask = (std::uint64_t{1} << k) - 1;
      const std::uint64_t limit = std::uint64_t{1} << n;
      while (mask < limit) {
        Proviso subset;
        for (std::size_t i = 0; i < n; ++i)
          if (mask >> i & 1u) subset.push_back(e.proviso[i]);
        candidates.insert(std::move(subset));
        const std::uint64_t low = mask & -mask;
        const std::uint64_t ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
      }
    }
    for (const Proviso& phi : candidates) {
      bool dominated = std::any_of(out.provisos.begin(), out.provisos.end(),
                                   [&](const Proviso& q) { return is_subset(q, phi); });
      if (dominated || !covered(ctx, phi, group)) continue;
      out.provisos.push_back(phi);
      out.sources.push_back(supersets_of(phi, group));
    }
  }
  return out;
}

// Greedy element removal, starting from each stored proviso and from each
// intersection of two stored provisos, keeping only covered subsets.
SimplifyOutcome bounded(const SaturatedContext& ctx, const std::vector<ExplanationSet::Entry>& group) {
  const Signature& sig = *ctx.signature;
  std::set<Proviso> seeds;
  for (const auto& e : group) seeds.insert(e.proviso);
  for (std::size_t i = 0; i < group.size(); ++i)
    for (std::size_t j = i + 1; j < group.size(); ++j) {
      Proviso meet;
      std::set_intersection(group[i].proviso.begin(), group[i].proviso.end(),
                            group[j].proviso.begin(), group[j].proviso.end(),
                            std::back_inserter(meet));
      if (!meet.empty() && covered(ctx, meet, group)) seeds.insert(std::move(meet));
    }

  SimplifyOutcome out;
  for (Proviso phi : seeds) {
    bool changed = true;
    while (changed && phi.size() > 1) {
      changed = false;
      for (AtomId x : sorted_by_text(phi, sig)) {
        Proviso rest;
        for (AtomId a : phi)
          if (a != x) rest.push_back(a);
        if (covered(ctx, rest, group)) {
          phi = std::move(rest);
          changed = true;
          break;
        }
      }
    }
    if (std::find(out.provisos.begin(), out.provisos.end(), phi) != out.provisos.end()) continue;
    out.sources.push_back(supersets_of(phi, group));
    out.provisos.push_back(std::move(phi));
  }
  return out;
}

}  // namespace

ExplanationSet simplify(const ExplanationSet& closed, const SaturatedContext& ctx,
                        const EngineOptions& options) {
  const Signature& sig = *ctx.signature;
  ExplanationSet out(closed.log_ptr());
  out.diagnostics = closed.diagnostics;
  for (const auto& [key, group] : closed.groups()) {
    std::size_t widest = 0;
    for (const auto& e : group) widest = std::max(widest, e.proviso.size());
    const std::string label = sig.atom_text(key.first) + " explains " + sig.atom_text(key.second);

    SimplifyOutcome result;
    if (widest <= options.exhaustive_limit && widest < 64) {
      result = exhaustive(ctx, group);
    } else {
      out.diagnostics.push_back("proviso of " + std::to_string(widest) + " atoms for " + label +
                                " simplified greedily; smaller provisos may exist");
      result = bounded(ctx, group);
    }

    std::vector<Proviso> all;
    for (const auto& e : group) all.push_back(e.proviso);
    const bool background = sat::entails_cover(ctx.clauses, {}, all);
    if (background)
      out.diagnostics.push_back("background alone licenses " + label + " with an empty proviso");

    for (std::size_t i = 0; i < result.provisos.size(); ++i) {
      const Proviso& phi = result.provisos[i];
      const auto& src = result.sources[i];
      StepId id;
      auto same = std::find_if(group.begin(), group.end(),
                               [&](const auto& e) { return e.proviso == phi; });
      if (same != group.end() && !background) {
        id = same->step;
      } else {
        DerivationStep step;
        step.rule = Rule::Simplification;
        step.explanans = key.first;
        step.explanandum = key.second;
        step.proviso = phi;
        step.premises = src;
        step.background_entails = background;
        id = out.log().append(std::move(step));
      }
      out.insert(key, phi, id);
    }
  }
  return out;
}

ExplanationSet minimize(const ExplanationSet& set) {
  ExplanationSet out(set.log_ptr());
  out.diagnostics = set.diagnostics;
  for (const auto& [key, group] : set.groups())
    for (const auto& e : group) {
      bool strict_superset = std::any_of(group.begin(), group.end(), [&](const auto& other) {
        return other.proviso.size() < e.proviso.size() && is_subset(other.proviso, e.proviso);
      });
      if (!strict_superset) out.insert(key, e.proviso, e.step);
    }
  return out;
}

ExplanationSet derive_raw(const SaturatedContext& ctx) {
  return transitivity_closure(base_case(ctx), ctx);
}

ExplanationSet derive_all(const SaturatedContext& ctx, const EngineOptions& options) {
  return minimize(simplify(derive_raw(ctx), ctx, options));
}

ExplanationSet derive_all(const Theory& theory, const EngineOptions& options) {
  return derive_all(saturate(theory), options);
}

// ---------------------------------------------------------------------------

void sort_by_text(std::vector<ExplanationAtom>& atoms, const Signature& sig) {
  auto texts = [&](const Proviso& p) {
    std::vector<std::string> out;
    for (AtomId a : p) out.push_back(sig.atom_text(a));
    std::sort(out.begin(), out.end());
    return out;
  };
  std::stable_sort(atoms.begin(), atoms.end(), [&](const ExplanationAtom& a, const ExplanationAtom& b) {
    const std::string& ax = sig.atom_text(a.explanans);
    const std::string& bx = sig.atom_text(b.explanans);
    if (ax != bx) return ax < bx;
    const std::string& ay = sig.atom_text(a.explanandum);
    const std::string& by = sig.atom_text(b.explanandum);
    if (ay != by) return ay < by;
    return texts(a.proviso) < texts(b.proviso);
  });
}

QueryResult explain_query(const SaturatedContext& ctx, const QueryOptions& options) {
  const Signature& sig = *ctx.signature;
  for (const auto& filter : {options.from, options.to})
    if (filter && !ctx.ontology->contains(*filter))
      throw Error(ErrorKind::UnknownAtom, "atom " + sig.atom_text(*filter) + " is not in the universe");

  ExplanationSet set = options.raw ? derive_raw(ctx) : derive_all(ctx, options.engine);
  QueryResult out;
  out.log = set.log_ptr();
  out.diagnostics = set.diagnostics;
  for (ExplanationAtom& a : set.atoms()) {
    if (options.from && a.explanans != *options.from) continue;
    if (options.to && a.explanandum != *options.to) continue;
    out.atoms.push_back(std::move(a));
  }
  sort_by_text(out.atoms, sig);
  return out;
}

QueryResult explain_query(const Theory& theory, const QueryOptions& options) {
  return explain_query(saturate(theory), options);
}

void verify_trace(const DerivationLog& log, StepId id, const SaturatedContext& ctx) {
  replay(log, id);
  const AugmentedOntology& onto = *ctx.ontology;
  for (StepId s : log.linearize(id)) {
    const DerivationStep& step = log.step(s);
    auto fail = [&](const char* what) {
      throw std::logic_error("step " + std::to_string(s) + ": " + what);
    };
    if (step.proviso.empty()) fail("empty proviso");
    if (!ctx.consistent(step.proviso)) fail("proviso inconsistent with the background");
    switch (step.rule) {
      case Rule::Base:
        if (!std::binary_search(ctx.active.begin(), ctx.active.end(), step.causal))
          fail("causal atom not active");
        if (!onto.implies(step.lower, step.causal.effect)) fail("lower atom does not reach the effect");
        if (!onto.implies(step.lower, step.explanandum))
          fail("lower atom does not reach the explanandum");
        break;
      case Rule::Transitivity:
        break;
      case Rule::Simplification: {
        std::vector<Proviso> sources;
        for (StepId p : step.premises) sources.push_back(log.step(p).proviso);
        if (!sat::entails_cover(ctx.clauses, step.proviso, sources))
          fail("proviso does not entail its sources");
        break;
      }
    }
  }
}

}  // namespace explika
