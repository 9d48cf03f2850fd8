#include <doctest.h>

#include <fstream>
#include <sstream>

#include "pqlift/cli.hpp"

using namespace pqlift;
using namespace pqlift::cli;

namespace {

std::string problem_path(const std::string& name) { return std::string(PQLIFT_PROBLEMS_DIR) + "/" + name + ".json"; }

json load(const std::string& name) {
  std::ifstream in(problem_path(name));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str());
}

Outcome exec(const std::string& command, const json& problem, Options o = {}) { return execute(command, problem, o); }

struct RunResult {
  int code;
  std::string out, err;
};

RunResult run_args(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("exit codes for the bundled problems") {
  const std::vector<std::tuple<std::string, std::string, int>> cases = {
      {"lift-q", "nm3_5_7", kPass},
      {"lift-q", "parity_clash", kFail},
      {"necc-check", "nm3_5_7", kPass},
      {"conductor-bound", "nm3_5_7", kPass},
      {"artin-lift", "artin_z15", kPass},
      {"lift-quadratic", "quadratic_1155", kPass},
      {"class-group", "class_group_1155", kPass},
      {"counting-bound", "counting_1155", kPass},
      {"hasse-invariant", "hasse_5_7", kPass},
      {"weight-crt", "weight_crt", kPass},
      {"local-compat", "local_compat_steinberg", kPass},
      {"remark2-check", "remark2_3", kPass},
  };
  for (const auto& [cmd, file, code] : cases) {
    CAPTURE(cmd);
    CAPTURE(file);
    const auto o = exec(cmd, load(file));
    CHECK(o.exit_code == code);
    CHECK(o.report["exit_code"] == code);
    CHECK(o.report["command"] == cmd);
    if (code == kFail) CHECK_FALSE(o.report.contains("certificate"));
    CHECK(o.report["provenance"]["conventions"].contains("teichmuller"));
  }
}

TEST_CASE("lift-q reports") {
  const auto ok = exec("lift-q", load("nm3_5_7"));
  CHECK(ok.report["verdict"] == "liftable");
  CHECK(ok.report["result"]["k_class"] == json({{"modulus", 12}, {"residue", 3}}));
  CHECK(ok.report["certificate"]["infinity_type"][0]["exponent"] == 3);

  const auto bad = exec("lift-q", load("parity_clash"));
  CHECK(bad.report["verdict"] == "not_liftable");
  bool found = false;
  for (const auto& c : bad.report["conditions"]) {
    if (!c["holds"].get<bool>()) {
      CHECK(contains(c["detail"].get<std::string>(), "congruence insoluble mod 2"));
      found = true;
    }
  }
  CHECK(found);

  // Necessary condition failure at 13.
  json p = load("nm3_5_7");
  p["rho"]["components"].push_back({{"prime", 13}, {"exponent", 1}, {"images", {"1/3"}}});
  const auto nec = exec("lift-q", p);
  CHECK(nec.exit_code == kFail);
  CHECK(nec.report["result"]["necessary"]["first_failure"] == 13);
  CHECK(exec("necc-check", p).exit_code == kFail);
}

TEST_CASE("--oracle agrees with the decision procedure") {
  Options o;
  o.oracle = true;
  for (const char* f : {"nm3_5_7", "parity_clash"}) {
    const auto r = exec("lift-q", load(f), o);
    CHECK(r.exit_code != kInternalError);
    CHECK(r.report["oracle"]["agrees"] == true);
  }
  CHECK(exec("artin-lift", load("artin_z15"), o).report["oracle"]["agrees"] == true);
  CHECK(exec("class-group", load("class_group_1155"), o).report["oracle"]["agrees"] == true);
}

TEST_CASE("weight24-example") {
  const auto r = exec("weight24-example", json{{"version", 1}});
  CHECK(r.exit_code == kPass);
  int congruences = 0;
  for (const auto& c : r.report["conditions"]) {
    CHECK(c["holds"] == true);
    if (c["label"] == "congruence") ++congruences;
  }
  CHECK(congruences == 4);
  CHECK(r.report["result"]["alpha_norm"] == "-36000");
  CHECK(r.report["result"]["literal_same_ideal_control"]["verdict"]["holds"] == false);
  Options o;
  o.precision = 5;
  CHECK(exec("weight24-example", json{{"version", 1}}, o).exit_code == kInvalidInput);
}

TEST_CASE("strict input handling") {
  json p = load("class_group_1155");
  p["extra"] = 1;
  auto r = exec("class-group", p);
  CHECK(r.exit_code == kInvalidInput);
  CHECK(r.report["error"]["kind"] == "invalid_input");
  CHECK(contains(r.report["error"]["message"].get<std::string>(), "problem.extra"));
  CHECK_FALSE(r.report.contains("certificate"));

  CHECK_THROWS_AS(parse_problem_text("{\"version\": 1, \"D\": -1155"), InvalidInput);
  CHECK_THROWS_AS(parse_problem_text("{\"version\": 2, \"D\": -1155}"), InvalidInput);
  CHECK_THROWS_AS(parse_problem_text("[1, 2]"), InvalidInput);

  json q = load("nm3_5_7");
  q["p"] = 9;
  CHECK(exec("lift-q", q).exit_code == kInvalidInput);
  q["p"] = 7;
  CHECK(exec("lift-q", q).exit_code == kInvalidInput);

  json lc = load("local_compat_steinberg");
  lc["rho"] = {{"kind", "supercuspidal"}};
  const auto sc = exec("local-compat", lc);
  CHECK(sc.exit_code == kInvalidInput);
  CHECK(contains(sc.report["error"]["message"].get<std::string>(), "out of implemented scope"));

  CHECK(exec("no-such-command", json::object()).exit_code == kInvalidInput);
  CHECK(exec("class-group", json{{"version", 1}, {"D", -1156}}).exit_code == kInvalidInput);
}

TEST_CASE("reports are deterministic") {
  for (const auto& [cmd, f] : std::vector<std::pair<std::string, std::string>>{
           {"lift-q", "nm3_5_7"}, {"lift-quadratic", "quadratic_1155"}, {"local-compat", "local_compat_steinberg"}}) {
    const auto a = exec(cmd, load(f)).report.dump();
    const auto b = exec(cmd, load(f)).report.dump();
    CHECK(a == b);
  }
  const auto h1 = exec("lift-q", load("nm3_5_7")).report["provenance"]["input_hash"];
  const auto h2 = exec("lift-q", load("parity_clash")).report["provenance"]["input_hash"];
  CHECK(h1 != h2);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("explain output") {
  const auto cb = explain(exec("counting-bound", load("counting_1155")).report);
  CHECK(contains(cb, "α²h = 32 < h² = 64 ⇒ non-liftable pair exists"));
  const auto pc = explain(exec("lift-q", load("parity_clash")).report);
  CHECK(contains(pc, "pqlift lift-q: not_liftable"));
  CHECK(contains(pc, ">>✗ weight CRT"));
  CHECK(contains(pc, "<- first failure"));
  CHECK_FALSE(contains(pc, "certificate:"));
  const auto ok = explain(exec("lift-q", load("nm3_5_7")).report);
  CHECK(contains(ok, "weight: k ≡ 3 mod 12"));
  CHECK(contains(ok, "infinity type: Nm^3"));
  const auto st = explain(exec("local-compat", load("local_compat_steinberg")).report);
  CHECK(contains(st, "monodromy N != 0"));
}

TEST_CASE("run: command line") {
  auto a = run_args({"lift-q", problem_path("nm3_5_7")});
  CHECK(a.code == kPass);
  CHECK(contains(a.out, "liftable"));
  auto b = run_args({"lift-q", problem_path("parity_clash"), "--json"});
  CHECK(b.code == kFail);
  CHECK(json::parse(b.out)["verdict"] == "not_liftable");
  auto c = run_args({"class-group", problem_path("does_not_exist")});
  CHECK(c.code == kInvalidInput);
  CHECK(contains(c.err, "cannot read"));
  auto d = run_args({"bogus"});
  CHECK(d.code == kInvalidInput);
  auto e = run_args({"class-group"});
  CHECK(e.code == kInvalidInput);
  auto f = run_args({"weight24-example", "--precision", "20", "--json"});
  CHECK(f.code == kPass);
  CHECK(json::parse(f.out)["result"]["precision"] == 20);
  auto g = run_args({"hasse-invariant", problem_path("hasse_5_7"), "--precision", "0", "--json"});
  CHECK(g.code == kInvalidInput);
  CHECK(json::parse(g.out)["error"]["kind"] == "invalid_input");
  auto h = run_args({"--version"});
  CHECK(h.code == kPass);
  CHECK(contains(h.out, PQLIFT_VERSION));
  auto v = run_args({"local-compat", problem_path("local_compat_steinberg"), "--verbose", "--json"});
  CHECK(v.code == kPass);
  CHECK(json::parse(v.out)["result"].contains("alternatives"));
}
