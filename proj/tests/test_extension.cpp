#include "doctest.h"

#include "fixtures.hpp"
#include "valtool/extension.hpp"

using namespace fx;

TEST_CASE("Ostrowski defect") {
  CHECK(defect_ostrowski(2, 1, 1, 2, true) == 1);
  CHECK(defect_ostrowski(4, 2, 2, 0, true) == 0);
  CHECK(defect_ostrowski(8, 2, 1, 2, true) == 2);
  CHECK_FALSE(defect_ostrowski(2, 1, 1, 2, false).has_value());
  CHECK_THROWS_AS(defect_ostrowski(6, 2, 2, 3, true), Error);
  CHECK_THROWS_AS(defect_ostrowski(12, 2, 2, 2, true), Error);  // 3 is not a power of 2
  CHECK_THROWS_AS(defect_ostrowski(4, 2, 1, 0, true), Error);   // characteristic 0 forces no defect
}

TEST_CASE("local degree defect") {
  MonomialForm m;
  m.a = 1;
  m.d = 2;
  CHECK(defect_local_degree(m, 1, 1, 1, 2) == 1);
  m.a = 2;
  m.d = 1;
  CHECK(defect_local_degree(m, 1, 2, 1, 0) == 0);
  m.a = 3;
  CHECK_THROWS_AS(defect_local_degree(m, 1, 2, 1, 2), Error);
}

TEST_CASE("ramification of the defect extension") {
  auto d = def2();
  auto rep = ramification_report(d.gR, d.gS, d.ext, 4);
  REQUIRE(rep.e);
  REQUIRE(rep.f);
  CHECK(*rep.e == 1);
  CHECK(*rep.f == 1);
  REQUIRE(rep.delta);
  CHECK(*rep.delta == 1);
  CHECK(rep.routes_agree);
  REQUIRE(rep.routes.size() == 3);
  CHECK(rep.routes[1].route == Route::Ostrowski);
  CHECK(rep.routes[1].delta == 1);
  CHECK(rep.routes[2].route == Route::LocalDegree);
  CHECK(rep.routes[2].delta == 1);
  REQUIRE(rep.monomial);
  CHECK(rep.monomial->a == 1);
  CHECK(rep.monomial->d == 2);
  CHECK(rep.res_degree == 1);
  CHECK(rep.int4);
  CHECK(rep.int3 == true);
}

TEST_CASE("ramification with splitting") {
  auto p = pi2();
  auto rep = ramification_report(p.gR, p.nu1, p.ext, 4);
  REQUIRE(rep.e);
  CHECK(*rep.e == 2);
  CHECK(*rep.f == 1);
  CHECK_FALSE(rep.routes[1].applicable);
  CHECK_FALSE(rep.routes[1].delta.has_value());
  // u = x^2, v = y^2 gives a d = 4 against e f = 2: the pair is not the stabilized one.
  CHECK_FALSE(rep.routes[2].consistent);
  CHECK_FALSE(rep.routes_agree);

  // after one blowup on each side: u1 = x1^2, v1 = y1^2 + 2 y1
  auto rc = q_ctx({"u1", "v1"}), sc = q_ctx({"x1", "y1"});
  ExtensionMap local(rc, {P(sc, "x1^2"), P(sc, "y1^2 + 2*y1")}, 4, 0, false);
  auto rl = ramification_report(p.gR, p.nu1, p.ext, 4, &local);
  REQUIRE(rl.monomial);
  CHECK(rl.monomial->a == 2);
  CHECK(rl.monomial->d == 1);
  CHECK(rl.routes[2].delta == 0);
  REQUIRE(rl.delta);
  CHECK(*rl.delta == 0);
  CHECK(rl.routes_agree);
  CHECK_FALSE(rl.int3.has_value());
}

TEST_CASE("ramification of the identity") {
  auto c = q_ctx();
  auto rc = q_ctx({"u", "v"});
  auto o = v1_oracle(c);
  auto gS = GenSeq::build(v1_spec(c), &o);
  auto gR = GenSeq::build(v1_spec(rc));
  ExtensionMap id(rc, {P(c, "x"), P(c, "y")}, 1, 0, true);
  auto rep = ramification_report(gR, gS, id, 3);
  CHECK(*rep.e == 1);
  CHECK(*rep.f == 1);
  CHECK(rep.delta == 0);
  CHECK(rep.routes_agree);
}

TEST_CASE("splitting reports") {
  SUBCASE("two extensions with irrational value") {
    auto p = pi2();
    auto rep = splitting_report({{"nu1", p.nu1}, {"nu2", p.nu2}}, p.ext, p.gR);
    REQUIRE(rep.candidates.size() == 2);
    CHECK(rep.candidates[0].restricts);
    CHECK(rep.candidates[1].restricts);
    CHECK(rep.distinct() == 2);
    CHECK(rep.splits());
    CHECK(!rep.witnesses.empty());
    // nu(u) = 2, nu(v - u) = pi + 2
    CHECK(p.gR.beta(0) == Value(2));
    CHECK(p.gR.beta(2) == Value(2, 1, Irrational::pi()));
    CHECK(candidate_value(p.nu2, p.ext(p.gR.key(2))) == Value(2, 1, Irrational::pi()));
  }
  SUBCASE("two series extensions of a discrete valuation") {
    auto d = disc();
    auto rep = splitting_report({{"nu1", d.nu1}, {"nu2", d.nu2}}, d.ext, d.gR);
    CHECK(rep.candidates[0].restricts);
    CHECK(rep.candidates[1].restricts);
    CHECK(rep.splits());
  }
  SUBCASE("single candidate") {
    auto d = def2();
    auto rep = splitting_report({{"nu", d.gS}}, d.ext, d.gR);
    CHECK(rep.candidates[0].restricts);
    CHECK(rep.distinct() == 1);
    CHECK_FALSE(rep.splits());
  }
  SUBCASE("wrong restriction") {
    auto p = pi2();
    auto c = p.s_ctx;
    const Tower& t = *c->tower;
    SeriesEmbedding wrong(c, c->tower, {series(t, {{1, 1}}), series(t, {{3, 1}})});
    auto rep = splitting_report({{"w", wrong}}, p.ext, p.gR);
    CHECK(rep.candidates[0].dominates);
    CHECK_FALSE(rep.candidates[0].restricts);
    CHECK(rep.candidates[0].diagnosis.find("expected") != std::string::npos);
    CHECK(rep.distinct() == 0);
    CHECK_THROWS(SeriesEmbedding(c, c->tower, {series(t, {{0, 1}}), series(t, {{1, 1}})}));
  }
}
