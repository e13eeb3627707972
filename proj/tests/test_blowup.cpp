#include "doctest.h"

#include "fixtures.hpp"
#include "valtool/blowup.hpp"

#include <random>

using namespace fx;

namespace {

GenSeq v1(const CtxPtr& c, const SeriesEmbedding* o) { return GenSeq::build(v1_spec(c), o); }

RingElem random_poly(const CtxPtr& c, std::mt19937& rng, int dx, int dy, int terms) {
  std::uniform_int_distribution<int> ix(0, dx), iy(0, dy), coef(-3, 3);
  RingElem f(c);
  for (int n = 0; n < terms; ++n) f += RingElem::monomial(c, ix(rng), iy(rng), coef(rng));
  return f;
}

}  // namespace

TEST_CASE("transform exponents") {
  int a, b, e;
  transform_exponents(2, 3, a, b, e);
  CHECK(a == 1);
  CHECK(b == 2);
  CHECK(e == 1);
  transform_exponents(1, 1, a, b, e);
  CHECK(a == 0);
  CHECK(b == 1);
  CHECK(e == 1);
  transform_exponents(3, 2, a, b, e);
  CHECK(2 * a + e == 3 * b);
  CHECK(a == 1);
  CHECK(e == 1);
  transform_exponents(5, 3, a, b, e);
  CHECK(5 * b - 3 * a == e);
  CHECK_THROWS_AS(transform_exponents(2, 4, a, b, e), Error);
}

TEST_CASE("V1 free transform") {
  auto c = q_ctx();
  auto o = v1_oracle(c);
  auto g = v1(c, &o);
  auto ft = free_transform(g);
  const TransformMap& m = ft.map;
  CHECK(m.a == 1);
  CHECK(m.b == 2);
  CHECK(m.eps == 1);
  CHECK(m.center.is_one());
  CHECK(m.target->names == std::array<std::string, 2>{"x1", "y1"});
  CHECK(ft.target.size() == 2);
  CHECK(ft.target.beta(0) == Value(Rational(1, 2)));
  CHECK(ft.target.beta(1) == Value(Rational(1, 2)));
  CHECK(ft.target.key(1) == RingElem::y(m.target));
  CHECK(ft.checks.ok());

  auto im = m.images();
  CHECK(im[0] == P(m.target, "x1^2*y1 + x1^2"));
  CHECK(im[1] == P(m.target, "x1^3*y1^2 + 2*x1^3*y1 + x1^3"));

  auto pb = pullback(RingElem::y(m.target), m);
  CHECK(pb.poly == P(c, "y^2 - x^3"));
  CHECK(pb.K == 3);
  CHECK(pb.L == 0);
}

TEST_CASE("strict transforms under V1") {
  auto c = q_ctx();
  auto g = v1(c, nullptr);
  auto m = free_transform(g).map;
  auto s = strict_transform_data(P(c, "y^2 - x^3"), m);
  CHECK(s.lambda == 6);
  CHECK(s.mu == 3);
  CHECK(s.st == RingElem::y(m.target));
  CHECK(strict_transform(P(c, "x"), m).is_unit());
  CHECK(strict_transform(P(c, "y"), m).is_unit());
  // st(f) pulled back is f up to the factored monomial.
  auto sx = strict_transform_data(P(c, "y^2 + x^3"), m);
  CHECK(sx.lambda == 6);
  CHECK(sx.st.is_unit());
}

TEST_CASE("insufficient keys") {
  auto c = q_ctx();
  auto g = v1(c, nullptr);
  try {
    free_transform(g.prefix(1));
    FAIL("expected insufficient keys");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::InsufficientKeys);
  }
}

TEST_CASE("shift table and iteration") {
  auto c = q_ctx();
  auto o = v1_oracle(c);
  auto g = v1(c, &o);
  auto ft = free_transform(g);
  REQUIRE(ft.shifts.size() == 1);
  CHECK(ft.shifts[0].ok);
  CHECK(*ft.shifts[0].nbar_t == *ft.shifts[0].nbar_s);

  CHECK(iterate_transforms(g, 0).steps.empty());
  auto one = iterate_transforms(g, 1);
  CHECK(one.steps.size() == 1);
  CHECK(one.stop_reason.empty());
  auto three = iterate_transforms(g, 3);
  CHECK(three.steps.size() == 1);
  CHECK(three.stop_reason.find("insufficient keys") != std::string::npos);
}

TEST_CASE("exponent bookkeeping for sigma monomials") {
  auto c = q_ctx();
  auto g = v1(c, nullptr);
  auto m = free_transform(g).map;
  for (int a0 = 0; a0 <= 6; ++a0)
    for (int a1 = 0; a1 <= 6; ++a1) {
      Value v = g.monomial_value({a0, a1});
      for (std::size_t i = 0; i <= 1; ++i) {
        if (!(v > g.beta(i))) continue;
        auto d = lemma1_check(g, m, i, {a0, a1});
        CHECK(d.holds);
      }
    }
  auto d = lemma1_check(g, m, 1, {0, 2});
  CHECK(d.t == 6);
  CHECK(d.lambda == 3);
}

TEST_CASE("transform preserves values") {
  auto c = q_ctx();
  auto o = v1_oracle(c);
  auto g = v1(c, &o);
  auto ft = free_transform(g);
  auto im = ft.map.images();
  std::mt19937 rng(7);
  int compared = 0;
  for (int round = 0; round < 150; ++round) {
    auto f = random_poly(c, rng, 5, 3, 4);
    if (f.is_zero()) continue;
    try {
      Value v = g.evaluate(f);
      Value w = ft.target.evaluate(substitute(f, im));
      CHECK(v == w);
      ++compared;
    } catch (const Error& e) {
      CHECK(e.kind == ErrorKind::InsufficientData);
    }
  }
  CHECK(compared > 50);
}

TEST_CASE("free transform of a longer sequence") {
  auto c = q_ctx();
  auto g = GenSeq::build(corn_spec(c));
  CHECK(g.sigma_indices() == std::vector<std::size_t>{0, 1, 3});
  auto ft = free_transform(g);
  const GenSeq& t = ft.target;
  REQUIRE(t.size() == 4);
  CHECK(t.beta(0) == Value(Rational(1, 2)));
  CHECK(t.beta(1) == Value(Rational(1, 2)));
  CHECK(t.beta(2) == Value(Rational(3, 4)));
  CHECK(t.beta(3) == Value(Rational(13, 8)));
  for (const auto& row : ft.shifts) CHECK(row.ok);
  for (const auto& ch : ft.checks.checks) CHECK_MESSAGE(ch.pass, ch.name << ": " << ch.detail);
  CHECK(t.key(2) == P(ft.map.target, "y1 - 2*x1"));
  CHECK(t.key(3) == P(ft.map.target, "(y1 - 2*x1)^2 - x1^3"));
  auto chain = iterate_transforms(g, 3);
  CHECK(chain.steps.size() == 2);
  CHECK(chain.steps[1].map.target->names[0] == "x2");
  CHECK(chain.stop_reason.find("insufficient keys") != std::string::npos);
}
