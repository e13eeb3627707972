#include "doctest.h"

#include "fixtures.hpp"
#include "valtool/blowup.hpp"
#include "valtool/graded.hpp"

#include <random>

using namespace fx;

namespace {

RingElem random_nonunit(const CtxPtr& c, std::mt19937& rng) {
  std::uniform_int_distribution<int> ix(0, 4), iy(0, 3), coef(1, 3);
  RingElem f(c);
  while (f.is_zero() || f.is_unit()) {
    f = RingElem(c);
    for (int n = 0; n < 3; ++n) {
      int i = ix(rng), j = iy(rng);
      if (i + j == 0) i = 1;
      f += RingElem::monomial(c, i, j, coef(rng));
    }
  }
  return f;
}

}  // namespace

TEST_CASE("initial forms on V1") {
  auto c = q_ctx();
  auto o = v1_oracle(c);
  auto g = GenSeq::build(v1_spec(c), &o);

  auto x = initial_form(P(c, "x"), g);
  CHECK(x.value == Value(1));
  CHECK(graded_str(x, g) == "in(x)");

  auto f = initial_form(P(c, "y^2 + x^3"), g);
  CHECK(f.value == Value(3));
  CHECK(graded_str(f, g) == "2*in(x)^3");
  CHECK(graded_equal(f, graded_mul(graded_monomial(g, {3, 0, 0}), initial_form(RingElem::constant(c, 2), g)), g));

  auto p2 = initial_form(P(c, "y^2 - x^3"), g);
  CHECK(p2.value == Value(Rational(7, 2)));
  CHECK(graded_equal(p2, graded_monomial(g, {0, 0, 1}), g));
  CHECK_FALSE(graded_equal(p2, graded_monomial(g, {2, 1, 0}), g));

  // in(y)^2 = in(x)^3 in gr
  CHECK(graded_equal(graded_pow(initial_form(P(c, "y"), g), 2, g), graded_monomial(g, {3, 0, 0}), g));
  CHECK_THROWS(initial_form(RingElem(c), g));
}

TEST_CASE("graded piece bases") {
  auto c = q_ctx();
  auto g = GenSeq::build(v1_spec(c));
  auto b3 = graded_piece_basis(3, g);
  REQUIRE(b3.size() == 1);
  CHECK(b3[0] == std::vector<int>{3, 0, 0});
  auto b72 = graded_piece_basis(Rational(7, 2), g);
  CHECK(b72.size() == 2);
  CHECK(std::find(b72.begin(), b72.end(), std::vector<int>{2, 1, 0}) != b72.end());
  CHECK(std::find(b72.begin(), b72.end(), std::vector<int>{0, 0, 1}) != b72.end());
  CHECK(graded_piece_basis(Rational(1, 3), g).empty());
  CHECK(graded_piece_basis(Rational(1, 2), g).empty());
}

TEST_CASE("subalgebra membership") {
  auto c = q_ctx();
  auto g = GenSeq::build(v1_spec(c));
  auto ix = graded_monomial(g, {1, 0, 0}), iy = graded_monomial(g, {0, 1, 0}), ip = graded_monomial(g, {0, 0, 1});

  auto m = subalgebra_membership(graded_monomial(g, {2, 0, 0}), {ix}, g);
  CHECK(m.member);
  CHECK(certificate_str(m, {"in(x)"}, *c->tower) == "in(x)^2");

  // in(P2) is a new generator: no relation over in(x), in(y).
  auto n = subalgebra_membership(ip, {ix, iy}, g);
  CHECK_FALSE(n.member);
  CHECK(n.rank_augmented == n.rank + 1);

  auto s = subalgebra_membership(graded_mul(ix, iy), {ix, iy}, g);
  CHECK(s.member);

  // value outside the generated semigroup
  auto o = subalgebra_membership(iy, {ix}, g);
  CHECK_FALSE(o.member);
  CHECK(o.candidates == 0);
}

TEST_CASE("graded presentation") {
  auto c = q_ctx();
  auto g = GenSeq::build(v1_spec(c));
  auto p = graded_presentation(g, 2);
  CHECK(p.generators == std::vector<std::size_t>{0, 1, 2});
  REQUIRE(p.relations.size() == 1);
  CHECK(p.relations[0].value == Value(3));
  CHECK(relation_str(p.relations[0], g) == "in(y)^2 - in(x)^3 = 0");
  CHECK(relation_vanishes(p.relations[0], g));

  auto p0 = graded_presentation(g, 0);
  CHECK(p0.generators == std::vector<std::size_t>{0});
  CHECK(p0.relations.empty());

  auto d = def2();
  auto pr = graded_presentation(d.gR, 4);
  CHECK(pr.generators.size() == 1);
  CHECK(pr.relations.empty());

  auto corn = GenSeq::build(corn_spec(c, 5));
  auto pc = graded_presentation(corn, 6);
  CHECK(!pc.relations.empty());
  for (const auto& r : pc.relations) CHECK(relation_vanishes(r, corn));
}

TEST_CASE("alignment on the model extensions") {
  SUBCASE("residue characteristic two, defect one") {
    auto d = def2();
    auto st = fingen_detect(d.gR, d.gS, d.ext, 4);
    CHECK(st.verdict.consistent);
    REQUIRE(st.e);
    CHECK(*st.e == 1);
    REQUIRE(st.f);
    CHECK(*st.f == 1);
    CHECK(st.monotone);
  }
  SUBCASE("irrational value, nu_1") {
    auto p = pi2();
    auto st = fingen_detect(p.gR, p.nu1, p.ext, 4);
    CHECK(st.verdict.consistent);
    CHECK(st.monotone);
    CHECK(st.int4);
    REQUIRE(st.image_relations.size() >= 2);
    CHECK(st.image_relations[0] == "in(u) = in(x)^2");
    CHECK(st.image_relations[1] == "in(v - u) = 2*in(x)*in(y - x)");
    REQUIRE(st.e);
    CHECK(*st.e == 2);
    for (const auto& l : st.levels)
      if (l.lambda) CHECK(*l.lambda <= 2);
  }
  SUBCASE("two extensions of a discrete valuation") {
    auto d = disc();
    auto st = fingen_detect(d.gR, d.g1, d.ext, 4);
    CHECK(st.verdict.consistent);
    CHECK(st.monotone);
    REQUIRE(!st.image_relations.empty());
    CHECK(st.image_relations[0] == "in(u) = in(x)^2");
  }
  SUBCASE("identity extension") {
    auto c = q_ctx();
    auto rc = q_ctx({"u", "v"});
    auto o = v1_oracle(c);
    auto gS = GenSeq::build(v1_spec(c), &o);
    GenSeqSpec rs = v1_spec(rc);
    auto gR = GenSeq::build(rs);
    ExtensionMap id(rc, {P(c, "x"), P(c, "y")}, 1, 0, true);
    auto st = fingen_detect(gR, gS, id, 3);
    CHECK(st.verdict.consistent);
    REQUIRE(st.e);
    CHECK(*st.e == 1);
    CHECK(st.int4);
  }
}

TEST_CASE("alignment obstruction under a free transform") {
  auto c = q_ctx();
  auto g = GenSeq::build(corn_spec(c, 8));
  auto ft = free_transform(g);
  auto st = fingen_detect(g, ft.target, ft.map.as_extension(), 6);
  CHECK_FALSE(st.verdict.consistent);
  CHECK(st.verdict.level == 1);
  CHECK(st.verdict.kind == "generator not in subalgebra");
  for (const auto& l : st.levels)
    if (l.s >= 1 && l.new_form_member) CHECK_FALSE(*l.new_form_member);
  for (std::size_t d = 1; d <= 6; ++d) {
    auto v = alignment_verdict(st, d);
    CHECK_FALSE(v.consistent);
    CHECK(v.level <= 1);
  }
  CHECK(st.verdict.str() == "ObstructionAt(1, generator not in subalgebra)");
}

TEST_CASE("integral relations") {
  auto d = def2();
  auto r = integral_relation(P(d.s_ctx, "x"), d.gR, d.gS, d.ext);
  CHECK(r.degree == 1);
  CHECK(r.residue_zero);
  CHECK(r.homogeneous);
  CHECK(r.vanishes_in_gr);
  CHECK_THROWS(integral_relation(P(d.s_ctx, "1 + x"), d.gR, d.gS, d.ext));

  std::mt19937 rng(7);
  for (int n = 0; n < 12; ++n) {
    auto f = random_nonunit(d.s_ctx, rng);
    auto ir = integral_relation(f, d.gR, d.gS, d.ext);
    INFO(f.str() << ": " << ir.text);
    CHECK(ir.degree >= 1);
    CHECK(ir.residue_zero);
    CHECK(ir.homogeneous);
    CHECK(ir.vanishes_in_gr);
  }

  auto p = pi2();
  // 2*nu(y - x) lies in the value group of R but is not a rational multiple of nu(u).
  CHECK_THROWS(integral_relation(P(p.s_ctx, "y - x"), p.gR, p.nu1, p.ext));
  auto xr = integral_relation(P(p.s_ctx, "x"), p.gR, p.nu1, p.ext);
  CHECK(xr.n1 == 2);
  CHECK(xr.text == "in(f)^2 - in(u) = 0");
  CHECK(xr.vanishes_in_gr);
}
