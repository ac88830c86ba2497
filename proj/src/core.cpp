#include "explika/core.hpp"

#include <algorithm>

namespace explika {

std::string_view to_string(ParamMode mode) {
  switch (mode) {
    case ParamMode::One: return "one";
    case ParamMode::All: return "all";
    case ParamMode::NA: return "na";
  }
  return "na";
}

// ---------------------------------------------------------------------------
// Signature

PredicateId Signature::declare_predicate(std::string name, std::vector<ParamMode> modes) {
  if (predicate_index_.count(name) || constant_index_.count(name))
    throw Error(ErrorKind::Redeclared, "symbol '" + name + "' is already declared");
  PredicateId id{static_cast<std::uint32_t>(predicates_.size())};
  predicate_index_.emplace(name, id);
  predicates_.push_back(PredicateDecl{std::move(name), std::move(modes)});
  return id;
}

ConstantId Signature::declare_constant(std::string name) {
  if (predicate_index_.count(name) || constant_index_.count(name))
    throw Error(ErrorKind::Redeclared, "symbol '" + name + "' is already declared");
  ConstantId id{static_cast<std::uint32_t>(constants_.size())};
  constant_index_.emplace(name, id);
  constants_.push_back(std::move(name));
  return id;
}

std::optional<PredicateId> Signature::find_predicate(std::string_view name) const {
  auto it = predicate_index_.find(std::string(name));
  if (it == predicate_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ConstantId> Signature::find_constant(std::string_view name) const {
  auto it = constant_index_.find(std::string(name));
  if (it == constant_index_.end()) return std::nullopt;
  return it->second;
}

std::string Signature::render(const GroundAtom& atom) const {
  std::string text = predicates_.at(atom.predicate.value).name;
  if (atom.args.empty()) return text;
  text += '(';
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) text += ", ";
    text += constants_.at(atom.args[i].value);
  }
  text += ')';
  return text;
}

AtomId Signature::intern(PredicateId predicate, std::span<const ConstantId> args) const {
  const PredicateDecl& decl = this->predicate(predicate);
  if (decl.arity() != args.size())
    throw Error(ErrorKind::ArityMismatch,
                "predicate '" + decl.name + "' has arity " + std::to_string(decl.arity()) +
                    ", got " + std::to_string(args.size()) + " argument(s)");
  for (ConstantId c : args)
    if (c.value >= constants_.size())
      throw Error(ErrorKind::UnknownConstant, "constant id out of range");

  std::vector<std::uint32_t> key;
  key.reserve(args.size());
  for (ConstantId c : args) key.push_back(c.value);

  std::lock_guard lock(atom_mutex_);
  auto [it, inserted] = atom_index_.try_emplace({predicate.value, std::move(key)}, AtomId{});
  if (inserted) {
    it->second = AtomId{static_cast<std::uint32_t>(atoms_.size())};
    GroundAtom atom{predicate, {args.begin(), args.end()}};
    std::string text = render(atom);
    atoms_.push_back(AtomRecord{std::move(atom), std::move(text)});
  }
  return it->second;
}

AtomId Signature::intern_atom(std::string_view predicate,
                              std::span<const std::string> args) const {
  auto pred = find_predicate(predicate);
  if (!pred) {
    if (find_constant(predicate))
      throw Error(ErrorKind::UnknownPredicate,
                  "'" + std::string(predicate) + "' is a constant, not a predicate");
    throw Error(ErrorKind::UnknownPredicate, "unknown predicate '" + std::string(predicate) + "'");
  }
  const PredicateDecl& decl = this->predicate(*pred);
  if (decl.arity() != args.size())
    throw Error(ErrorKind::ArityMismatch,
                "predicate '" + decl.name + "' has arity " + std::to_string(decl.arity()) +
                    ", got " + std::to_string(args.size()) + " argument(s)");
  std::vector<ConstantId> ids;
  ids.reserve(args.size());
  for (const std::string& a : args) {
    auto c = find_constant(a);
    if (!c) throw Error(ErrorKind::UnknownConstant, "unknown constant '" + a + "'");
    ids.push_back(*c);
  }
  return intern(*pred, ids);
}

std::optional<AtomId> Signature::find_atom(PredicateId predicate,
                                           std::span<const ConstantId> args) const {
  std::vector<std::uint32_t> key;
  for (ConstantId c : args) key.push_back(c.value);
  std::lock_guard lock(atom_mutex_);
  auto it = atom_index_.find({predicate.value, key});
  if (it == atom_index_.end()) return std::nullopt;
  return it->second;
}

const GroundAtom& Signature::atom(AtomId id) const {
  std::lock_guard lock(atom_mutex_);
  return atoms_.at(id.value).atom;
}

const std::string& Signature::atom_text(AtomId id) const {
  std::lock_guard lock(atom_mutex_);
  return atoms_.at(id.value).text;
}

std::size_t Signature::atom_count() const {
  std::lock_guard lock(atom_mutex_);
  return atoms_.size();
}

// ---------------------------------------------------------------------------
// Formula

Formula Formula::atom(AtomId id) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = id;
  return Formula(std::move(n));
}

Formula Formula::causal(CausalAtom c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Causal;
  n->causal = c;
  return Formula(std::move(n));
}

Formula Formula::negation(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->children.push_back(std::move(f));
  return Formula(std::move(n));
}

Formula Formula::conjunction(std::vector<Formula> parts) {
  if (parts.size() == 1) return parts.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = std::move(parts);
  return Formula(std::move(n));
}

Formula Formula::disjunction(std::vector<Formula> parts) {
  if (parts.size() == 1) return parts.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = std::move(parts);
  return Formula(std::move(n));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Implies;
  n->children = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(n));
}

Formula Formula::equivalence(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Iff;
  n->children = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(n));
}

bool Formula::is_classical() const {
  if (kind() == Kind::Causal) return false;
  return std::all_of(children().begin(), children().end(),
                     [](const Formula& c) { return c.is_classical(); });
}

void Formula::collect_atoms(std::set<AtomId>& out) const {
  switch (kind()) {
    case Kind::Atom: out.insert(atom_id()); return;
    case Kind::Causal:
      out.insert(causal_atom().cause);
      out.insert(causal_atom().effect);
      return;
    default:
      for (const Formula& c : children()) c.collect_atoms(out);
  }
}

void Formula::collect_causal_atoms(std::vector<CausalAtom>& out) const {
  if (kind() == Kind::Causal) {
    if (std::find(out.begin(), out.end(), causal_atom()) == out.end()) out.push_back(causal_atom());
    return;
  }
  for (const Formula& c : children()) c.collect_causal_atoms(out);
}

bool Formula::evaluate(const std::function<bool(AtomId)>& atom_value,
                       const std::function<bool(CausalAtom)>& causal_value) const {
  auto ch = children();
  switch (kind()) {
    case Kind::Atom: return atom_value(atom_id());
    case Kind::Causal: return causal_value(causal_atom());
    case Kind::Not: return !ch[0].evaluate(atom_value, causal_value);
    case Kind::And:
      for (const Formula& c : ch)
        if (!c.evaluate(atom_value, causal_value)) return false;
      return true;
    case Kind::Or:
      for (const Formula& c : ch)
        if (c.evaluate(atom_value, causal_value)) return true;
      return false;
    case Kind::Implies:
      return !ch[0].evaluate(atom_value, causal_value) || ch[1].evaluate(atom_value, causal_value);
    case Kind::Iff:
      return ch[0].evaluate(atom_value, causal_value) == ch[1].evaluate(atom_value, causal_value);
  }
  return false;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::Atom: return a.atom_id() == b.atom_id();
    case Formula::Kind::Causal: return a.causal_atom() == b.causal_atom();
    default: break;
  }
  auto ca = a.children();
  auto cb = b.children();
  return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

// ---------------------------------------------------------------------------
// Theory

std::vector<CausalAtom> Theory::causal_atoms() const {
  std::vector<CausalAtom> out;
  for (const Formula& f : causal_) f.collect_causal_atoms(out);
  return out;
}

Theory Theory::with_background(Formula f) const {
  Theory copy = *this;
  copy.background_.push_back(std::move(f));
  return copy;
}

TheoryBuilder::TheoryBuilder() { theory_.signature_ = std::make_shared<Signature>(); }

PredicateId TheoryBuilder::predicate(std::string name, std::vector<ParamMode> modes) {
  return theory_.signature_->declare_predicate(std::move(name), std::move(modes));
}

PredicateId TheoryBuilder::predicate(std::string name, std::size_t arity) {
  return predicate(std::move(name), std::vector<ParamMode>(arity, ParamMode::NA));
}

ConstantId TheoryBuilder::constant(std::string name) {
  return theory_.signature_->declare_constant(std::move(name));
}

AtomId TheoryBuilder::atom(std::string_view predicate, std::vector<std::string> args) const {
  return theory_.signature_->intern_atom(predicate, args);
}

void TheoryBuilder::check_formula(const Formula& f) const {
  std::set<AtomId> atoms;
  f.collect_atoms(atoms);
  const std::size_t known = theory_.signature_->atom_count();
  for (AtomId a : atoms)
    if (a.value >= known)
      throw Error(ErrorKind::UndeclaredSymbol, "formula mentions an atom of another signature");
}

TheoryBuilder& TheoryBuilder::background(Formula f) {
  check_formula(f);
  if (!f.is_classical()) {
    theory_.causal_.push_back(std::move(f));
    return *this;
  }
  theory_.background_.push_back(std::move(f));
  return *this;
}

TheoryBuilder& TheoryBuilder::causal(Formula f) {
  check_formula(f);
  theory_.causal_.push_back(std::move(f));
  return *this;
}

TheoryBuilder& TheoryBuilder::cause(AtomId cause, AtomId effect) {
  return causal(Formula::causal(CausalAtom{cause, effect}));
}

TheoryBuilder& TheoryBuilder::isa(std::string_view sub, std::string_view super,
                                  std::optional<SourceSpan> span) {
  const Signature& sig = *theory_.signature_;
  auto sub_c = sig.find_constant(sub);
  auto super_c = sig.find_constant(super);
  auto sub_p = sig.find_predicate(sub);
  auto super_p = sig.find_predicate(super);

  for (std::string_view name : {sub, super})
    if (!sig.find_constant(name) && !sig.find_predicate(name))
      throw Error(ErrorKind::UndeclaredSymbol, "undeclared symbol '" + std::string(name) + "'",
                  span);

  if (sub_c && super_c) {
    theory_.links_.push_back(ConstLink{*sub_c, *super_c});
    return *this;
  }
  if (sub_p && super_p) {
    const std::size_t a = sig.predicate(*sub_p).arity();
    const std::size_t b = sig.predicate(*super_p).arity();
    if (a != b)
      throw Error(ErrorKind::PredLinkArityMismatch,
                  "IS-A between '" + std::string(sub) + "/" + std::to_string(a) + "' and '" +
                      std::string(super) + "/" + std::to_string(b) + "': arities differ",
                  span);
    if (a == 0)
      theory_.links_.push_back(PropLink{*sub_p, *super_p});
    else
      theory_.links_.push_back(PredLink{*sub_p, *super_p});
    return *this;
  }
  throw Error(ErrorKind::LinkKindMismatch,
              "IS-A link '" + std::string(sub) + " -> " + std::string(super) +
                  "' mixes a constant and a predicate",
              span);
}

// ---------------------------------------------------------------------------
// Validation of name-level theories

namespace {

class Resolver {
 public:
  explicit Resolver(TheoryBuilder& builder) : builder_(builder) {}

  AtomId resolve(const RawAtom& a) const {
    try {
      return builder_.atom(a.predicate, a.args);
    } catch (const Error& e) {
      throw Error(e.kind(), e.what(), a.span);
    }
  }

  Formula resolve(const RawFormula& f) const {
    using K = Formula::Kind;
    std::vector<Formula> kids;
    for (const RawFormula& c : f.children) kids.push_back(resolve(c));
    switch (f.kind) {
      case K::Atom: return Formula::atom(resolve(f.atom));
      case K::Causal: return Formula::causal(CausalAtom{resolve(f.atom), resolve(f.effect)});
      case K::Not: return Formula::negation(std::move(kids.at(0)));
      case K::And: return Formula::conjunction(std::move(kids));
      case K::Or: return Formula::disjunction(std::move(kids));
      case K::Implies: return Formula::implication(std::move(kids.at(0)), std::move(kids.at(1)));
      case K::Iff: return Formula::equivalence(std::move(kids.at(0)), std::move(kids.at(1)));
    }
    throw Error(ErrorKind::SyntaxError, "malformed formula", f.span);
  }

 private:
  TheoryBuilder& builder_;
};

}  // namespace

Theory validate_theory(const RawTheory& raw) {
  TheoryBuilder builder;
  auto relocate = [](const Error& e, const std::optional<SourceSpan>& span) {
    return Error(e.kind(), e.what(), e.span() ? e.span() : span);
  };

  for (const RawPredicate& p : raw.predicates) {
    try {
      builder.predicate(p.name, p.modes);
    } catch (const Error& e) {
      throw relocate(e, p.span);
    }
  }
  for (const RawConstant& c : raw.constants) {
    try {
      builder.constant(c.name);
    } catch (const Error& e) {
      throw relocate(e, c.span);
    }
  }
  for (const RawLink& l : raw.links) builder.isa(l.sub, l.super, l.span);

  Resolver resolver(builder);
  for (const RawFormula& f : raw.formulas) {
    Formula resolved = resolver.resolve(f);
    if (resolved.is_classical())
      builder.background(std::move(resolved));
    else
      builder.causal(std::move(resolved));
  }
  return builder.build();
}

}  // namespace explika
