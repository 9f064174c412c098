#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "giry/report.hpp"
#include "support.hpp"

using namespace giry;
using test::q;

namespace {

const std::string data = GIRY_DATA;

struct Run {
  int code;
  std::string out, err;
};

Run go(RunConfig cfg) {
  std::ostringstream out, err;
  int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig json(std::string command) {
  RunConfig c;
  c.command = std::move(command);
  c.format = OutputFormat::Json;
  return c;
}

int shell(const std::string& args) {
  int status = std::system((std::string(GIRY_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t parse_error_line(const std::string& text) {
  Registry reg;
  try {
    parse_space_text(text, reg);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("space files") {
  Registry reg;
  parse_space_text("space I kind=geometric carrier=interval 0 1 metric=l1\n", reg);
  const auto& I = reg.at("I");
  CHECK(I.space->kind() == SpaceKind::Geometric);
  CHECK(I.metric.name == "l1");
  CHECK(I.space->format(I.space->combine2(q(1, 2), I.space->parse("0"), I.space->parse("1"))) == "1/2");

  parse_space_text("space C kind=discrete carrier=labels 0 u 1 rule=example-C metric=discrete\n", reg);
  const auto& C = *reg.at("C").space;
  CHECK(C.format(C.combine2(q(1, 3), C.parse("0"), C.parse("1"))) == "u");
  CHECK(C.format(C.combine2(q(1, 3), C.parse("1"), C.parse("1"))) == "1");

  CHECK(parse_error_line("\n# comment\nspace J kind=curved carrier=interval 0 1 metric=l1\n") == 3);
  CHECK(parse_error_line("space J kind=geometric carrier=torus 1 metric=l1\n") == 1);
  CHECK(parse_error_line("space J kind=discrete carrier=interval 0 1 metric=l1\n") == 1);
  CHECK(parse_error_line("space J kind=geometric carrier=interval 0 1 metric=l1\n"
                         "space J kind=geometric carrier=interval 0 2 metric=l1\n") == 2);
  CHECK(parse_error_line("glue a -> b at 0\n") == 1);
  CHECK(parse_error_line("space J kind=geometric carrier=interval 0 x metric=l1\n") == 1);
  CHECK(parse_error_line("space J kind=geometric carrier=interval 0 1 metric=ext\n") == 1);

  // Column of the bad kind.
  Registry r2;
  try {
    parse_space_text("space J kind=curved carrier=interval 0 1\n", r2);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.column() == 9);
  }
}

TEST_CASE("a user file with products and a glued space") {
  auto reg = builtin_registry();
  parse_space_file(data + "/user.spaces", reg);
  CHECK(reg.at("sq").metric.name == "linf");
  CHECK(reg.at("sqxabc").space->kind() == SpaceKind::Mixed);
  CHECK(reg.at("sqxabc").metric.name == "sum");
  CHECK(reg.at("Cu").expect_reject);
  const auto& g = *reg.at("glued").space;
  CHECK(g.format(g.combine2(q(1, 2), g.parse("lo[1]"), g.parse("hi[3]"))) == "hi[3/2]");
  CHECK_THROWS_AS(parse_space_file(data + "/missing.spaces", reg), std::runtime_error);
}

TEST_CASE("check-laws on N-min") {
  auto c = json("check-laws");
  c.space = "N-min";
  auto r = go(c);
  CHECK(r.code == 0);
  auto doc = Json::parse(r.out);
  CHECK(doc["schema"] == 1);
  CHECK(doc["seed"] == 1);
  CHECK(doc["ok"] == true);
  const auto& rep = doc["report"][0];
  CHECK(rep["space"] == "N-min");
  CHECK(rep["provenance"] == "discrete-min");
  CHECK(rep["verdict"] == "sampled-pass");
  CHECK(rep["unit_law"]["verdict"] == "pass");
  CHECK(rep["coseparator_law"]["infinite_cases"].get<std::size_t>() > 0);
  for (const char* key : {"unit_law", "mult_law", "coseparator_law", "support_condition", "compat"})
    CHECK(rep.contains(key));
}

TEST_CASE("JSON reports round-trip") {
  auto c = json("counterexample");
  c.seed = 5;
  auto r = go(c);
  auto doc = Json::parse(r.out);
  CHECK(doc.dump(2) + "\n" == r.out);
  CHECK(doc["seed"] == 5);
}

TEST_CASE("the counterexample report") {
  auto r = go(json("counterexample"));
  CHECK(r.code == 0);
  auto rep = Json::parse(r.out)["report"];
  CHECK(rep["ideals"] == Json::parse(R"([["u"],["0","u"],["1","u"]])"));
  CHECK(rep["char_maps_coseparate"] == true);
  CHECK(rep["char_maps_affine"] == Json::parse("[false,true,true]"));
  auto w = rep["compat"]["witness"];
  CHECK(w["p"] == "1/2");
  CHECK(w["x"] == "0");
  CHECK(w["y"] == "1");
  CHECK(w["z"] == "0");
  CHECK(w["lhs"] == "1");
  CHECK(w["rhs"] == "1/2");
  CHECK(rep["support"]["witness"]["image"] == "u");
  CHECK(rep["poset"]["witness"]["reason"] == "third-element");
  CHECK(rep["build"]["condition"] == "poset-not-total");
}

TEST_CASE("wasserstein from measure files") {
  auto c = json("wasserstein");
  c.space = "I";
  c.measures = {data + "/P.msr", data + "/Q.msr"};
  auto r = go(c);
  CHECK(r.code == 0);
  auto rep = Json::parse(r.out)["report"];
  CHECK(rep["result"]["cost"] == "1/2");
  CHECK(rep["result"]["marginals_ok"] == true);
  CHECK(rep["brute_force_agrees"] == true);

  // The space can come from the file.
  c.space.clear();
  CHECK(go(c).code == 0);

  c.measures = {data + "/P.msr"};
  CHECK(go(c).code == 2);
  c.measures = {data + "/P.msr", data + "/bad.msr"};
  CHECK(go(c).code == 2);
  c.measures = {data + "/P.msr", data + "/meng.msr"};
  CHECK(go(c).code == 2);
}

TEST_CASE("expect evaluates the algebra") {
  auto c = json("expect");
  c.measures = {data + "/meng.msr"};
  auto r = go(c);
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["report"]["values"][0]["expectation"] == "H[1/5]");
}

TEST_CASE("fields-demo") {
  auto r = go(json("fields-demo"));
  CHECK(r.code == 0);
  auto rep = Json::parse(r.out)["report"];
  CHECK(rep["agreement"]["agree_on_coarse"] == true);
  CHECK(rep["agreement"]["agree_on_fine"] == false);
  CHECK(rep["evaluation"]["ok"] == true);
}

TEST_CASE("expect=reject turns a rejection into a pass") {
  auto c = json("check-laws");
  c.input_path = data + "/user.spaces";
  c.space = "Cu";
  CHECK(go(c).code == 0);
  c.space = "glued";
  CHECK(go(c).code == 0);

  auto f = json("check-laws");
  f.input_path = data + "/fails.spaces";
  f.space = "C2";
  auto r = go(f);
  CHECK(r.code == 1);
  CHECK(Json::parse(r.out)["report"][0]["rejection"]["condition"] == "poset-not-total");

  auto compat = json("check-compat");
  compat.input_path = data + "/user.spaces";
  CHECK(go(compat).code == 0);
}

TEST_CASE("usage errors exit with 2") {
  auto c = json("check-laws");
  c.space = "nope";
  CHECK(go(c).code == 2);
  c = json("check-laws");
  c.input_path = data + "/bad_kind.spaces";
  auto r = go(c);
  CHECK(r.code == 2);
  CHECK(r.err.find(":2:") != std::string::npos);
  c = json("frobnicate");
  CHECK(go(c).code == 2);
  c = json("check-laws");
  c.budget = 0;
  CHECK(go(c).code == 2);
}

TEST_CASE("text output and files") {
  RunConfig c;
  c.command = "counterexample";
  auto r = go(c);
  CHECK(r.code == 0);
  CHECK(r.out.find("schema: 1") != std::string::npos);
  CHECK(r.out.find("elapsed_ms: ") != std::string::npos);

  auto path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/giry_cli_test.json";
  auto j = json("fields-demo");
  j.output = path;
  auto w = go(j);
  CHECK(w.code == 0);
  CHECK(w.out.empty());
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  CHECK(Json::parse(s.str())["ok"] == true);
  std::remove(path.c_str());
}

TEST_CASE("same config, same bytes") {
  auto c = json("check-compat");
  c.seed = 9;
  c.budget = 200;
  CHECK(go(c).out == go(c).out);
}

TEST_CASE("the binary honours the exit-code contract") {
  CHECK(shell("counterexample") == 0);
  CHECK(shell("check-laws --space N-min --budget 100") == 0);
  CHECK(shell("check-laws --input " + data + "/fails.spaces --space C2 --budget 50") == 1);
  CHECK(shell("check-laws --input " + data + "/bad_kind.spaces") == 2);
  CHECK(shell("frobnicate") == 2);
  CHECK(shell("check-laws --seed 0") == 2);
  CHECK(shell("check-laws --format yaml") == 2);
  CHECK(shell("--help") == 0);
  CHECK(shell("wasserstein " + data + "/P.msr " + data + "/Q.msr --format json") == 0);
}
