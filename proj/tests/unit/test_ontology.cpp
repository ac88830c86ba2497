#include <doctest.h>

#include <algorithm>
#include <map>

#include "explika/ontology.hpp"
#include "explika/oracle.hpp"
#include "support.hpp"

using namespace explika;

namespace {

std::set<std::string> link_set(const Theory& t) {
  const auto v = render_links(build_ontology(t), t.signature());
  return {v.begin(), v.end()};
}

// Single-step lifts closed by a plain worklist over pairs.
std::set<std::pair<AtomId, AtomId>> naive_relation(const Theory& t, std::span<const AtomId> universe) {
  const Signature& sig = t.signature();
  const std::set<AtomId> members(universe.begin(), universe.end());
  std::set<std::pair<AtomId, AtomId>> rel;
  for (AtomId x : universe) {
    rel.insert({x, x});
    const GroundAtom g = sig.atom(x);
    for (const OntoLink& link : t.links()) {
      std::vector<GroundAtom> next;
      if (auto* c = std::get_if<ConstLink>(&link)) {
        for (std::size_t i = 0; i < g.args.size(); ++i) {
          const ParamMode mode = sig.predicate(g.predicate).modes[i];
          GroundAtom y = g;
          if (mode == ParamMode::One && g.args[i] == c->sub) y.args[i] = c->super;
          else if (mode == ParamMode::All && g.args[i] == c->super) y.args[i] = c->sub;
          else continue;
          next.push_back(y);
        }
      } else if (auto* p = std::get_if<PropLink>(&link)) {
        if (g.predicate == p->sub) next.push_back({p->super, g.args});
      } else if (auto* q = std::get_if<PredLink>(&link)) {
        if (g.predicate == q->sub) next.push_back({q->super, g.args});
      }
      for (const GroundAtom& y : next) {
        auto id = sig.find_atom(y.predicate, y.args);
        if (id && members.count(*id)) rel.insert({x, *id});
      }
    }
  }
  std::vector<std::pair<AtomId, AtomId>> work(rel.begin(), rel.end());
  while (!work.empty()) {
    const auto [x, y] = work.back();
    work.pop_back();
    for (const auto& [a, b] : std::vector(rel.begin(), rel.end())) {
      if (a == y && rel.insert({x, b}).second) work.push_back({x, b});
      if (b == x && rel.insert({a, y}).second) work.push_back({a, y});
    }
  }
  return rel;
}

}  // namespace

TEST_CASE("reachability is reflexive and transitive, cycles allowed") {
  Reachability r(4);
  r.add_edge(0, 1);
  r.add_edge(1, 2);
  r.add_edge(2, 1);
  r.close();
  CHECK(r.reaches(0, 2));
  CHECK(r.reaches(2, 1));
  CHECK(r.reaches(1, 2));
  CHECK(r.reaches(3, 3));
  CHECK_FALSE(r.reaches(2, 0));
  CHECK_FALSE(r.reaches(0, 3));
  CHECK(std::vector(r.down(1).begin(), r.down(1).end()) == std::vector<std::uint32_t>{0, 1, 2});
}

TEST_CASE("down then up alarm ontology gives four augmented links") {
  const Theory t = testing::load("alarm");
  CHECK(link_set(t) == std::set<std::string>{
                           "Heard(hooter) => Heard(warning_signal)",
                           "Heard(loud_bell) => Heard(loud_noise)",
                           "Heard(loud_bell) => Heard(warning_signal)",
                           "Heard(red_flashing_light) => Heard(warning_signal)",
                       });
  const AugmentedOntology onto = build_ontology(t);
  CHECK(onto.universe().size() == 7);
}

TEST_CASE("ownership links, including the transitive composite") {
  const std::set<std::string> five{
      "Own(human, book) => Own(mary, book)",
      "Own(human, written_document) => Own(mary, written_document)",
      "Own(mary, book) => Own(mary, written_document)",
      "Own(human, book) => Own(human, written_document)",
      "Own(human, book) => Own(mary, written_document)",
  };
  const Theory full = testing::load("own");
  const std::set<std::string> all = link_set(full);
  CHECK(std::includes(all.begin(), all.end(), five.begin(), five.end()));
  std::set<std::string> restricted;
  for (const std::string& l : all)
    if (l.find("student") == std::string::npos) restricted.insert(l);
  CHECK(restricted == five);
  CHECK(all.size() == 12);

  CHECK(link_set(testing::load("own_direct")) == five);
}

TEST_CASE("links between predicates") {
  const Theory t = testing::load("perceived");
  const AugmentedOntology onto = build_ontology(t);
  CHECK(onto.implies(parse_atom("Heard(bell)", t), parse_atom("Perceived(bell)", t)));
  CHECK(onto.implies(parse_atom("Heard(noise)", t), parse_atom("Perceived(noise)", t)));
  CHECK_FALSE(onto.implies(parse_atom("Perceived(bell)", t), parse_atom("Heard(bell)", t)));
  CHECK_FALSE(onto.implies(parse_atom("Heard(bell)", t), parse_atom("Perceived(noise)", t)));
}

TEST_CASE("no links, no augmented links") {
  CHECK(link_set(testing::load("flu")).empty());
  CHECK(link_set(testing::load("rain")).empty());
}

TEST_CASE("universe grows through related constants in both directions") {
  const Theory t = parse_theory(
      "pred P/1(na).\nconst a, b, c, d.\nisa a -> b.\nisa c -> b.\nfact P(a).\n");
  const AugmentedOntology onto = build_ontology(t);
  CHECK(onto.universe().size() == 3);
  CHECK(onto.links().empty());
  CHECK_FALSE(onto.contains(parse_atom("P(d)", t)));
}

TEST_CASE("augmented relation equals the naive lifting fixpoint") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    CAPTURE(seed);
    const Theory t = random_theory(seed);
    const AugmentedOntology onto = build_ontology(t);
    const auto expected = naive_relation(t, onto.universe());
    const auto got = onto.links(true);
    CHECK(std::set(got.begin(), got.end()) == expected);
  }
}

TEST_CASE("na positions never change along a link of one predicate") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Theory t = random_theory(seed);
    const bool pred_links = std::any_of(t.links().begin(), t.links().end(),
                                        [](const OntoLink& l) { return std::holds_alternative<PredLink>(l); });
    if (pred_links) continue;
    const Signature& sig = t.signature();
    for (const auto& [x, y] : build_ontology(t).links()) {
      const GroundAtom& gx = sig.atom(x);
      const GroundAtom& gy = sig.atom(y);
      if (gx.predicate != gy.predicate) {
        CHECK(gx.args.empty());
        CHECK(gy.args.empty());
        continue;
      }
      const auto& modes = sig.predicate(gx.predicate).modes;
      for (std::size_t i = 0; i < modes.size(); ++i)
        if (modes[i] == ParamMode::NA) CHECK(gx.args[i] == gy.args[i]);
    }
  }
}

TEST_CASE("adding a link never removes an augmented link") {
  const std::string base = "pred P/1(one), Q/1(all), R/0, S/0.\nconst a, b, c.\n"
                           "isa a -> b.\nfact P(a) | Q(b).\nfact R.\n";
  const std::set<std::string> before = link_set(parse_theory(base));
  for (const char* extra : {"isa b -> c.\n", "isa P -> Q.\n", "isa R -> S.\n", "isa c -> a.\n"}) {
    CAPTURE(extra);
    const std::set<std::string> after = link_set(parse_theory(base + extra));
    CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
  }
}

TEST_CASE("propositional and single-constant encodings agree") {
  const std::set<std::string> prop = link_set(testing::load("sof_c2"));
  const Theory unary = parse_theory(
      "pred SOF/1(one), Step/1(one), Evolution/1(one), Slow_increase/1(one), Sharp_step/1(one), "
      "Alarm/1(one).\nconst k.\n"
      "cause SOF(k) => Step(k).\ncause Evolution(k) => Alarm(k).\n"
      "isa Step -> Evolution.\nisa Slow_increase -> Evolution.\nisa Sharp_step -> Step.\n");
  std::set<std::string> stripped;
  for (std::string l : link_set(unary)) {
    for (std::size_t p; (p = l.find("(k)")) != std::string::npos;) l.erase(p, 3);
    stripped.insert(l);
  }
  CHECK(stripped == prop);
  CHECK(prop.size() == 4);
}
