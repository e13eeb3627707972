#include "doctest.h"

#include "fixtures.hpp"
#include "valtool/scenario.hpp"

#include <fstream>
#include <sstream>

using namespace fx;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(VALTOOL_FIXTURE_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Section& section(const Report& r, const std::string& title) {
  for (const auto& s : r.sections)
    if (s.title == title) return s;
  FAIL("no section " << title);
  return r.sections.front();
}

bool has_line(const Section& s, const std::string& l) {
  auto ls = s.lines();
  return std::find(ls.begin(), ls.end(), l) != ls.end();
}

void check_parse_error(const std::string& text, std::size_t line, std::size_t col, const std::string& what) {
  try {
    parse_scenario(text);
    FAIL("no error for: " << text);
  } catch (const ParseError& e) {
    CHECK(e.line == line);
    CHECK(e.column == col);
    CHECK_MESSAGE(std::string(e.what()).find(what) != std::string::npos, e.what());
  }
}

const char* kV1Head =
    "[ring S]\n"
    "params x y\n"
    "[valuation v]\n"
    "ring S\n"
    "beta x 1\n"
    "beta y 3/2\n";

}  // namespace

TEST_CASE("parse the V1 scenario") {
  Scenario s = parse_scenario(slurp("v1.scn"));
  CHECK(s.rings.size() == 1);
  REQUIRE(s.valuations.size() == 1);
  CHECK(s.embeddings.size() == 1);
  const GenSeqSpec& sp = s.valuations[0].spec;
  CHECK(sp.beta1 == Value(Rational(3, 2)));
  REQUIRE(sp.steps.size() == 1);
  CHECK(sp.steps[0].beta == Value(Rational(7, 2)));
  CHECK(sp.steps[0].n == 2);
  CHECK(s.valuations[0].oracle == "o");
  CHECK(s.commands.size() == 6);
  CHECK(check_scenario(s).ok);
}

TEST_CASE("valuation sections round trip") {
  auto same = [](const GenSeqSpec& spec, const char* field) {
    std::string text = std::string(field) + "[ring S]\nparams " + spec.ctx->names[0] + " " + spec.ctx->names[1] + "\n" +
                       format_valuation("v", "S", spec);
    Scenario s = parse_scenario(text);
    auto a = GenSeq::build(spec);
    auto b = GenSeq::build(s.valuations[0].spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      CHECK(a.key(j).str() == b.key(j).str());
      CHECK(a.beta(j) == b.beta(j));
    }
  };
  auto c = q_ctx();
  same(v1_spec(c), "");
  same(corn_spec(c, 6), "");
  same(def2().gS.spec(), "[field]\nchar 2\n");
  same(def2().gR.spec(), "[field]\nchar 2\n");
  same(disc().g1.spec(), "");
}

TEST_CASE("exact values") {
  std::map<std::string, IrrationalPtr> irr{{"pi", Irrational::pi()}};
  CHECK(parse_value("7/2", irr) == Value(Rational(7, 2)));
  CHECK(parse_value("2 + pi", irr) == Value(2, 1, Irrational::pi()));
  CHECK(parse_value("1/2*pi - 3", irr) == Value(-3, Rational(1, 2), Irrational::pi()));
  CHECK_THROWS(parse_value("pi^2", irr));
  CHECK_THROWS(parse_value("tau", irr));
  Scenario s = parse_scenario(std::string(kV1Head) + "key P2 = y^2 - x^3 value 7/2\n");
  CHECK(s.valuations[0].spec.steps[0].beta.q0 == Rational(7, 2));
}

TEST_CASE("parse errors carry positions") {
  check_parse_error(std::string(kV1Head) + "key P2 = y^2 - x^3 + P5 value 7/2\n", 7, 22, "P5");
  check_parse_error(std::string(kV1Head) + "key P3 = y^2 - x^3 value 7/2\n", 7, 5, "expected key P2");
  check_parse_error(std::string(kV1Head) + "key P2 = y^2 - x^3 value 7/\n", 7, 28, "");
  check_parse_error(std::string(kV1Head) + "oracle nope\n", 7, 8, "undeclared embedding");
  check_parse_error("[ring S]\n[ring S]\n", 2, 7, "duplicate name");
  check_parse_error("[rings S]\n", 1, 2, "unknown section");
  check_parse_error("[valuation v]\nbeta x 1\n", 2, 1, "'ring' must come first");
  check_parse_error("[ring S]\n[valuation v]\nring S\nbeta x 1\n", 2, 1, "needs beta");
  check_parse_error(std::string(kV1Head) + "[run]\nfrobnicate\n", 8, 1, "unknown command");
  check_parse_error(std::string(kV1Head) + "[run]\neval y^2 + z\n", 8, 12, "z");
  check_parse_error(std::string(kV1Head) + "[valuation w]\nring S\nbeta x 1\nbeta y 1\n[run]\neval x\n", 12, 6,
                    "must name a valuation");
  check_parse_error("[ring S]\n[ring R]\nparams u v\n[extension E]\nmap R -> S\nu x\nv 1 + y\n", 4, 1, "maximal ideal");
}

TEST_CASE("running scenarios") {
  RunOptions opt;
  SUBCASE("V1") {
    Report r = run_scenario(parse_scenario(slurp("v1.scn")), opt);
    CHECK_FALSE(r.faulted());
    CHECK(has_line(section(r, "eval v1 y^2 + x^3"), "value = 3"));
    CHECK(has_line(section(r, "eval v1 y^2 - x^3"), "value = 7/2"));
    CHECK(has_line(section(r, "eval v1 y^2 - x^3"), "agree: yes"));
    const Section& b = section(r, "blowup v1 1");
    CHECK(has_line(b, "  x1 = x^2*y^-1, y1 + 1 = x^-3*y^2"));
    CHECK(!b.dot.empty());
  }
  SUBCASE("DEF2 ramification") {
    Report r = run_scenario(parse_scenario(slurp("def2.scn")), opt);
    CHECK_FALSE(r.faulted());
    const Section& s = section(r, "ramify E");
    CHECK(has_line(s, "e = 1"));
    CHECK(has_line(s, "f = 1"));
    CHECK(has_line(s, "delta = 1"));
    auto tabs = s.tables();
    REQUIRE(tabs.size() == 1);
    CHECK(tabs[0]->header == std::vector<std::string>{"route", "e", "f", "delta", "consistent"});
    CHECK(tabs[0]->rows[1] == std::vector<std::string>{"Ostrowski", "1", "1", "1", "yes"});
    CHECK(tabs[0]->rows[2] == std::vector<std::string>{"LocalDegree", "1", "1", "1", "yes"});
    std::string csv = render_csv(r);
    CHECK(csv.find("\nroute,e,f,delta,consistent\n") != std::string::npos);
    CHECK(has_line(section(r, "graded nuR 4"), "1 generators, 0 relations (polynomial ring)"));
    CHECK(has_line(section(r, "graded nuS 4"), "1 generators, 0 relations (polynomial ring)"));
  }
  SUBCASE("PI2") {
    Report r = run_scenario(parse_scenario(slurp("pi2.scn")), opt);
    CHECK_FALSE(r.faulted());
    CHECK(has_line(section(r, "eval nu v - u"), "value = 2 + pi"));
    const Section& f = section(r, "fingen E 4");
    CHECK(has_line(f, "verdict: ConsistentWithFinGen(1)"));
    CHECK(has_line(f, "  in(u) = in(x)^2"));
    CHECK(has_line(section(r, "split E"), "splits: yes"));
    CHECK(has_line(section(r, "ramify E"), "delta = 0"));
  }
  SUBCASE("DISC") {
    Report r = run_scenario(parse_scenario(slurp("disc.scn")), opt);
    CHECK_FALSE(r.faulted());
    CHECK(has_line(section(r, "split E"), "splits: yes"));
    CHECK(has_line(section(r, "fingen E 4"), "  in(u) = in(x)^2"));
  }
  SUBCASE("empty command list") {
    Report r = run_scenario(parse_scenario("[run]\n"), opt);
    CHECK(r.sections.empty());
    CHECK_FALSE(r.faulted());
    CHECK(render_text(r).empty());
  }
  SUBCASE("a fault does not stop later commands") {
    std::string text = std::string(kV1Head) + "key P2 = y^2 - x^3 value 3\n" +
                       "[valuation w]\nring S\nbeta x 1\nbeta y 1\n[run]\neval v x\neval w x^2*y\n";
    Scenario s = parse_scenario(text);
    CHECK_FALSE(check_scenario(s).ok);
    Report r = run_scenario(s, opt);
    REQUIRE(r.sections.size() == 2);
    CHECK(r.sections[0].fault);
    CHECK_FALSE(r.sections[1].fault);
    CHECK(has_line(r.sections[1], "value = 3"));
    CHECK(r.faulted());
  }
  SUBCASE("insufficient keys is an outcome") {
    Report r = run_scenario(parse_scenario(std::string(kV1Head) + "[run]\nblowup 1\n"), opt);
    CHECK_FALSE(r.faulted());
  }
}

TEST_CASE("reports are deterministic") {
  for (const char* f : {"v1.scn", "def2.scn", "pi2.scn", "disc.scn", "corn.scn"}) {
    Scenario s = parse_scenario(slurp(f));
    RunOptions opt;
    opt.seed = 5;
    for (Format fm : {Format::Text, Format::Csv, Format::Dot}) {
      std::string a = render(run_scenario(s, opt), fm), b = render(run_scenario(parse_scenario(slurp(f)), opt), fm);
      CHECK_MESSAGE(a == b, f);
    }
  }
}
