#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "explika/cli.hpp"
#include "support.hpp"

using namespace explika;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, bool color = false) {
  args.insert(args.begin(), "explika");
  std::ostringstream out, err;
  CliEnvironment env;
  env.color = color;
  const int code = run_cli(args, out, err, env);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

std::string scratch(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("explika_test_" + name + ".cet");
  std::ofstream(path) << text;
  return path.string();
}

std::string fixture(const std::string& name) { return testing::theory_path(name); }

}  // namespace

TEST_CASE("check reports consistency and exit codes") {
  const Run ok = run({"check", fixture("flu")});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("ok: ", 0) == 0);
  CHECK(run({"check", fixture("inconsistent")}).code == 3);
  CHECK(run({"check", "/nonexistent/theory.cet"}).code == 4);

  const Run bad = run({"check", scratch("syntax", "pred A/0.\nfact A &.\n")});
  CHECK(bad.code == 2);
  CHECK(bad.err.find(":2:") != std::string::npos);
  CHECK(bad.err.find("error[SyntaxError]") != std::string::npos);
  CHECK(bad.out.empty());

  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("dimacs dump") {
  const Run r = run({"check", "--dump-cnf", fixture("flu")});
  CHECK(r.code == 0);
  CHECK(r.out.find("p cnf ") != std::string::npos);
}

TEST_CASE("explain lists the optimal explanations") {
  const Run r = run({"explain", fixture("fig1"), "--from", "alpha", "--to", "delta"});
  CHECK(r.code == 0);
  CHECK(split(r.out) == std::vector<std::string>{
                            "alpha explains delta because_possible {alpha, beta3, epsilon1}",
                            "alpha explains delta because_possible {alpha, beta3, epsilon2}",
                            "alpha explains delta because_possible {alpha, gamma1}",
                            "alpha explains delta because_possible {alpha, gamma2}",
                        });
  const Run raw = run({"explain", fixture("fig1"), "--from", "alpha", "--to", "delta", "--raw"});
  CHECK(split(raw.out).size() > 4);

  const Run none = run({"explain", fixture("sof"), "--to", "Slow_increase"});
  CHECK(none.code == 0);
  CHECK(none.out.empty());

  const Run warm = run({"explain", fixture("mary_warm")});
  CHECK(warm.code == 0);
  CHECK(warm.out.find("Getting_cold") == std::string::npos);

  const Run unknown = run({"explain", fixture("alarm"), "--to", "Heard(alarm)"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("UnknownAtom") != std::string::npos);
  CHECK(run({"explain", fixture("alarm"), "--to", "Nope"}).code == 2);
}

TEST_CASE("explain --trace shows every rule") {
  const Run r = run({"explain", fixture("alarm"), "--trace", "--from", "On(alarm)", "--to", "Wake_up"});
  CHECK(r.code == 0);
  CHECK(r.out.find("by base") != std::string::npos);
  CHECK(r.out.find("by transitivity") != std::string::npos);
  CHECK(r.out.find("by simplification") != std::string::npos);
  CHECK(r.out.find('\x1b') == std::string::npos);
  const Run c = run({"explain", fixture("alarm"), "--trace"}, true);
  CHECK(c.out.find('\x1b') != std::string::npos);
}

TEST_CASE("explain --json is stable and well formed") {
  const Run a = run({"explain", fixture("alarm"), "--json"});
  const Run b = run({"explain", fixture("alarm"), "--json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto doc = nlohmann::json::parse(a.out);
  CHECK(doc["schema"] == "explika/1");
  const std::string digest = doc["theory_digest"];
  CHECK(digest == "sha256:" + sha256_hex(render_theory(testing::load("alarm"))));
  CHECK(digest.size() == 7 + 64);
  REQUIRE(doc["explanations"].is_array());
  CHECK(doc["explanations"].size() == testing::derive_lines(testing::load("alarm")).size());
  std::set<std::uint64_t> ids;
  for (const auto& s : doc["steps"]) ids.insert(s["id"].get<std::uint64_t>());
  for (const auto& e : doc["explanations"]) {
    CHECK(e["proviso"].is_array());
    for (const auto& id : e["trace"]) CHECK(ids.count(id.get<std::uint64_t>()) == 1);
  }

  const Run bg = run({"explain", scratch("bg", "pred A/0, B/0.\ncause A => B.\nfact A.\n"), "--json"});
  CHECK(bg.code == 0);
  CHECK(nlohmann::json::accept(bg.out));
  CHECK_FALSE(bg.err.empty());
}

TEST_CASE("ontology prints the implied links") {
  const Run r = run({"ontology", fixture("alarm")});
  CHECK(r.code == 0);
  CHECK(split(r.out).size() == 4);
  CHECK(r.out.find("Heard(loud_bell) => Heard(loud_noise)") != std::string::npos);
}

TEST_CASE("diff-oracle") {
  CHECK(run({"diff-oracle", fixture("flu")}).code == 0);
  CHECK(run({"diff-oracle", fixture("fig1")}).code == 5);
  const Run r = run({"diff-oracle", "--random", "0", "100"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 mismatches") != std::string::npos);
  CHECK(run({"diff-oracle"}).code == 2);
}

TEST_CASE("color setting") {
  CHECK(color_enabled("always", false));
  CHECK_FALSE(color_enabled("never", true));
  CHECK(color_enabled("auto", true));
  CHECK_FALSE(color_enabled(nullptr, false));
  CHECK(color_enabled(nullptr, true));
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
