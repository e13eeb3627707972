#pragma once

#include "valtool/genseq.hpp"

#include <functional>

namespace fx {

using namespace valtool;

inline CtxPtr q_ctx(std::array<std::string, 2> names = {"x", "y"}) { return make_ctx(Tower::base(0), names); }

inline RingElem P(const CtxPtr& c, const char* s) { return RingElem::parse(c, s); }

inline Series series(const Tower& t, std::initializer_list<std::pair<long, long>> terms, long prec = Series::kExact) {
  Series s;
  s.prec = prec;
  for (auto [e, c] : terms) s.terms.emplace(e, t.constant(t.levels(), c));
  return s;
}

inline TailTerm tail(const Tower& t, long c, std::vector<int> sigma) {
  return {t.constant(t.levels(), c), std::move(sigma)};
}

// x -> t^2, y -> t^3 + t^4.
inline SeriesEmbedding v1_oracle(const CtxPtr& c) {
  const Tower& t = *c->tower;
  return SeriesEmbedding(c, c->tower, {series(t, {{2, 1}}), series(t, {{3, 1}, {4, 1}})});
}

// nu(x) = 1, nu(y) = 3/2, P2 = y^2 - x^3 of value 7/2.
inline GenSeqSpec v1_spec(const CtxPtr& c) {
  GenSeqSpec s;
  s.ctx = c;
  s.beta0 = 1;
  s.beta1 = Rational(3, 2);
  s.steps.push_back({2, {tail(*c->tower, -1, {3, 0})}, Rational(7, 2)});
  return s;
}


inline Series series_q(const Tower& t, const std::vector<std::pair<long, Rational>>& terms, long prec = Series::kExact) {
  Series s;
  s.prec = prec;
  for (const auto& [e, c] : terms) s.terms.emplace(e, t.constant(t.levels(), c));
  return s;
}

// Appends P_{i+1} = P_i - alpha*U_i steps (n = 1) with U_i the reduced monomial of value beta_i.
inline void chain_steps(GenSeqSpec& s, const std::vector<std::pair<Rational, Value>>& alpha_beta) {
  for (const auto& [alpha, beta] : alpha_beta) {
    auto g = GenSeq::build(s);
    std::size_t i = g.last();
    auto u = g.represent(g.beta(i), i - 1);
    std::vector<int> sigma = *u;
    sigma.push_back(0);
    const Tower& t = *s.ctx->tower;
    s.steps.push_back({1, {{t.constant(t.levels(), -alpha), sigma}}, beta});
  }
}

inline long tri(long k) { return k * (k + 1) / 2; }

// Over F_2: x -> t, y -> sum_{k>=1} t^{k(k+1)/2}; keys y + x + x^3 + ... of values tri(k).
struct Def2 {
  CtxPtr s_ctx, r_ctx;
  SeriesEmbedding s_oracle, r_oracle;
  GenSeq gS, gR;
  ExtensionMap ext;
};

inline Def2 def2(int keys = 8, int terms = 14) {
  auto F2 = Tower::base(2);
  auto sc = make_ctx(F2, {"x", "y"});
  auto rc = make_ctx(F2, {"u", "v"});
  const Tower& t = *F2;
  std::vector<std::pair<long, Rational>> ys, vs;
  for (long k = 1; k <= terms; ++k) {
    ys.push_back({tri(k), 1});
    vs.push_back({2 * tri(k), 1});
  }
  long prec = tri(terms + 1);
  SeriesEmbedding so(sc, F2, {series(t, {{1, 1}}), series_q(t, ys, prec)});
  SeriesEmbedding ro(rc, F2, {series(t, {{1, 1}}), series_q(t, vs, 2 * prec)});
  GenSeqSpec ss{sc, 1, 1, {}, {}};
  GenSeqSpec rs{rc, 1, 2, {}, {}};
  std::vector<std::pair<Rational, Value>> sa, ra;
  for (int k = 2; k <= keys; ++k) {
    sa.push_back({1, Rational(tri(k))});
    ra.push_back({1, Rational(2 * tri(k))});
  }
  chain_steps(ss, sa);
  chain_steps(rs, ra);
  auto gS = GenSeq::build(ss, &so);
  auto gR = GenSeq::build(rs, &ro);
  ExtensionMap ext(rc, {RingElem::parse(sc, "x"), RingElem::parse(sc, "y^2")}, 2, 2, true);
  return {sc, rc, so, ro, gS, gR, ext};
}

// nu_1(x) = 1, nu_1(y - x) = pi + 1 over Q; R: u = x^2, v = y^2.
struct Pi2 {
  CtxPtr s_ctx, r_ctx;
  GenSeq nu1, nu2, gR;
  ExtensionMap ext;
};

inline Pi2 pi2() {
  auto Q = Tower::base(0);
  auto sc = make_ctx(Q, {"x", "y"});
  auto rc = make_ctx(Q, {"u", "v"});
  auto pi = Irrational::pi();
  const Tower& t = *Q;
  GenSeqSpec s1{sc, 1, 1, {{1, {tail(t, -1, {1, 0})}, Value(1, 1, pi)}}, {}};
  GenSeqSpec s2{sc, 1, 1, {{1, {tail(t, 1, {1, 0})}, Value(1, 1, pi)}}, {}};
  GenSeqSpec r{rc, 2, 2, {{1, {tail(t, -1, {1, 0})}, Value(2, 1, pi)}}, {}};
  ExtensionMap ext(rc, {RingElem::parse(sc, "x^2"), RingElem::parse(sc, "y^2")}, 4, 0, false);
  return {sc, rc, GenSeq::build(s1), GenSeq::build(s2), GenSeq::build(r), ext};
}

// R: the curve v = u*p(u), p = exp truncated at order 8, with nu(u) = 2; S candidates y = +-x*sqrt(p(x^2)).
struct Disc {
  CtxPtr s_ctx, r_ctx;
  SeriesEmbedding nu1, nu2, r_oracle;
  GenSeq g1, gR;
  ExtensionMap ext;
};

inline Disc disc() {
  auto Q = Tower::base(0);
  auto sc = make_ctx(Q, {"x", "y"});
  auto rc = make_ctx(Q, {"u", "v"});
  const Tower& t = *Q;
  std::vector<std::pair<long, Rational>> y1, y2, v;
  Integer fact = 1;
  for (long k = 0; k <= 8; ++k) {
    if (k) fact *= k;
    Rational yk = Rational(1) / (Rational(Integer(1) << k) * Rational(fact));
    y1.push_back({2 * k + 1, yk});
    y2.push_back({2 * k + 1, -yk});
    v.push_back({2 * k + 2, Rational(1) / Rational(fact)});
  }
  SeriesEmbedding n1(sc, Q, {series(t, {{1, 1}}), series_q(t, y1, 19)});
  SeriesEmbedding n2(sc, Q, {series(t, {{1, 1}}), series_q(t, y2, 19)});
  SeriesEmbedding ro(rc, Q, {series(t, {{2, 1}}), series_q(t, v)}, 1, 0, 2);
  GenSeqSpec ss{sc, 1, 1, {}, {}};
  chain_steps(ss, {{1, 3}, {Rational(1, 2), 5}, {Rational(1, 8), 7}, {Rational(1, 48), 9}});
  GenSeqSpec rs{rc, 2, 2, {}, {}};
  chain_steps(rs, {{1, 4}, {1, 6}, {Rational(1, 2), 8}, {Rational(1, 6), 10}});
  ExtensionMap ext(rc, {RingElem::parse(sc, "x^2"), RingElem::parse(sc, "y^2")}, 4, 0, false);
  auto g1 = GenSeq::build(ss, &n1);
  auto gR = GenSeq::build(rs, &ro);
  return {sc, rc, n1, n2, ro, g1, gR, ext};
}

// V1 continued (keys P0..P_{keys-1}): P3 = P2 - 2x^2y (15/4), then P_{i+1} = P_i^2 - U_i with beta_{i+1} = 2 beta_i + 2^-i.
inline GenSeqSpec corn_spec(const CtxPtr& c, std::size_t keys = 5) {
  GenSeqSpec s = v1_spec(c);
  s.steps.push_back({1, {tail(*c->tower, -2, {2, 1, 0})}, Rational(15, 4)});
  for (std::size_t i = 3; i + 1 < keys; ++i) {
    auto g = GenSeq::build(s);
    Value b = g.beta(i);
    auto u = g.represent(Rational(2) * b, i - 1);
    std::vector<int> sigma = *u;
    sigma.push_back(0);
    s.steps.push_back({2, {tail(*c->tower, -1, sigma)}, Rational(2) * b + Rational(1, Integer(1) << i)});
  }
  return s;
}

// Sum of c * prod P_j^a_j.
inline RingElem reconstruct(const PAdicExpansion& e, const GenSeq& g, const CtxPtr& c) {
  RingElem out(c);
  for (const auto& t : e.terms) {
    RingElem m = RingElem::constant(c, TowerElem(e.tower, t.c));
    for (std::size_t j = 0; j < t.a.size(); ++j)
      if (t.a[j]) m *= g.key(j).embed(c).pow(static_cast<unsigned>(t.a[j]));
    out += m;
  }
  return out;
}

}  // namespace fx
