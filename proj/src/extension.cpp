#include "valtool/extension.hpp"

#include <random>
#include <sstream>

namespace valtool {

namespace {

// log_p q for a positive integer q that is a power of p.
std::optional<int> log_power(Integer q, const Integer& p) {
  int k = 0;
  while (q > 1 && q % p == 0) {
    q /= p;
    ++k;
  }
  if (q != 1) return std::nullopt;
  return k;
}

int quotient_defect(const Integer& num, const Integer& den, const Integer& p, const char* what) {
  if (den <= 0 || num <= 0 || num % den != 0) {
    std::ostringstream os;
    os << what << ": " << num << "/" << den << " is not integral";
    fail(ErrorKind::Inconsistent, os.str());
  }
  Integer q = num / den;
  if (p == 0) {
    if (q != 1) {
      std::ostringstream os;
      os << what << ": characteristic 0 forces " << num << " = " << den;
      fail(ErrorKind::Inconsistent, os.str());
    }
    return 0;
  }
  auto k = log_power(q, p);
  if (!k) {
    std::ostringstream os;
    os << what << ": " << q << " is not a power of " << p;
    fail(ErrorKind::Inconsistent, os.str());
  }
  return *k;
}

struct Estimate {
  Value v;
  bool exact = true;  // otherwise v is a lower bound
};

std::optional<Estimate> estimate(const Candidate& c, const RingElem& f) {
  if (const auto* g = std::get_if<GenSeq>(&c)) {
    try {
      return Estimate{g->evaluate(f), true};
    } catch (const Error& e) {
      if (e.kind != ErrorKind::InsufficientData) throw;
      return std::nullopt;
    }
  }
  const auto& s = std::get<SeriesEmbedding>(c);
  if (auto v = s.value(f)) return Estimate{*v, true};
  Series im = s.image(f);
  if (im.exact()) return std::nullopt;
  return Estimate{Value(s.scale() * Rational(im.prec)), false};
}

// Decided difference: one side exact and the other exact and different, or bounded above it.
bool differ(const std::optional<Estimate>& a, const std::optional<Estimate>& b) {
  if (!a || !b) return false;
  if (a->exact && b->exact) return !(a->v == b->v);
  if (a->exact) return b->v > a->v;
  if (b->exact) return a->v > b->v;
  return false;
}

std::string estimate_str(const std::optional<Estimate>& e) {
  if (!e) return "?";
  return (e->exact ? "" : ">=") + str(e->v);
}

// y minus the part of its series that is a polynomial in x, when x maps to s^m.
std::optional<RingElem> truncation(const SeriesEmbedding& s) {
  const CtxPtr& c = s.ctx();
  if (s.tower()->levels() != c->tower->levels()) return std::nullopt;
  const Series& sx = s.images()[0];
  if (sx.terms.size() != 1 || !sx.exact()) return std::nullopt;
  const auto& [m, cx] = *sx.terms.begin();
  if (!Tower::is_zero(c->tower->sub(c->tower->levels(), cx, c->tower->constant(c->tower->levels(), 1)))) return std::nullopt;
  RingElem p = RingElem::y(c);
  bool any = false;
  for (const auto& [k, coef] : s.images()[1].terms) {
    if (k % m != 0 || k >= s.images()[1].prec) continue;
    p -= RingElem::constant(c, TowerElem(c->tower, coef)) * RingElem::x(c).pow(static_cast<unsigned>(k / m));
    any = true;
  }
  if (!any) return std::nullopt;
  return p;
}

RingElem random_elem(const CtxPtr& c, std::mt19937_64& rng, int dx, int dy) {
  std::uniform_int_distribution<int> ix(0, dx), iy(0, dy), coef(-3, 3), count(1, 4);
  RingElem f(c);
  int n = count(rng);
  for (int t = 0; t < n; ++t) {
    int i = ix(rng), j = iy(rng);
    if (i + j == 0) j = 1;
    int a = coef(rng);
    if (a) f += RingElem::monomial(c, i, j, a);
  }
  return f;
}

}  // namespace

std::optional<int> defect_ostrowski(int field_degree, const Integer& e, const Integer& f, const Integer& p,
                                    bool unique) {
  if (e < 1 || f < 1) fail(ErrorKind::Precondition, "e and f must be positive");
  if (!unique) return std::nullopt;
  return quotient_defect(Integer(field_degree), e * f, p, "inconsistent ramification data");
}

int defect_local_degree(const MonomialForm& mf, int res_degree, const Integer& e, const Integer& f,
                        const Integer& p) {
  if (e < 1 || f < 1 || res_degree < 1) fail(ErrorKind::Precondition, "e, f and the residue degree must be positive");
  return quotient_defect(Integer(mf.a) * mf.d * res_degree, e * f, p, "inconsistent local degree");
}

const char* to_string(Route r) {
  switch (r) {
    case Route::Alignment:
      return "Alignment";
    case Route::Ostrowski:
      return "Ostrowski";
    case Route::LocalDegree:
      return "LocalDegree";
  }
  return "?";
}

RamificationReport ramification_report(const GenSeq& gR, const GenSeq& gS, const ExtensionMap& ext,
                                       std::size_t depth, const ExtensionMap* local) {
  RamificationReport rep;
  rep.alignment = fingen_detect(gR, gS, ext, depth);
  const AlignmentState& st = rep.alignment;
  rep.e = st.e;
  rep.f = st.f;
  rep.int4 = st.int4;

  RouteResult al{Route::Alignment, true, std::nullopt, st.monotone && st.int4, st.verdict.str()};
  rep.routes.push_back(al);

  const Integer& p = ext.residue_char;
  RouteResult os{Route::Ostrowski};
  if (!rep.e || !rep.f) {
    os.note = "e or f not stabilized";
  } else if (!ext.unique.value_or(false)) {
    os.applicable = false;
    os.note = "unique extension not declared";
  } else {
    os.applicable = true;
    try {
      os.delta = defect_ostrowski(ext.field_degree, *rep.e, *rep.f, p, true);
      os.note = "uniqueness declared, not proved";
    } catch (const Error& err) {
      if (err.kind != ErrorKind::Inconsistent) throw;
      os.consistent = false;
      os.note = err.what();
    }
  }
  rep.routes.push_back(os);

  const ExtensionMap& lp = local ? *local : ext;
  RouteResult ld{Route::LocalDegree};
  rep.monomial = monomialize_check(lp);
  const std::size_t dS = lp.target->tower->dim(), dR = lp.source->tower->dim();
  rep.res_degree = static_cast<int>(dS / std::max<std::size_t>(dR, 1));
  if (!rep.e || !rep.f) {
    ld.note = "e or f not stabilized";
  } else if (!rep.monomial) {
    ld.note = "not monomial; blow up further";
  } else {
    ld.applicable = true;
    try {
      ld.delta = defect_local_degree(*rep.monomial, rep.res_degree, *rep.e, *rep.f, p);
      ld.note = "formula applied at user-selected level";
    } catch (const Error& err) {
      if (err.kind != ErrorKind::Inconsistent) throw;
      ld.consistent = false;
      ld.note = err.what();
    }
  }
  rep.routes.push_back(ld);

  for (const auto& r : rep.routes) {
    if (!r.consistent) rep.routes_agree = false;
    if (!r.delta) continue;
    if (!rep.delta) rep.delta = r.delta;
    else if (*rep.delta != *r.delta) rep.routes_agree = false;
  }
  if (rep.delta && rep.e && rep.f && ext.unique.value_or(false)) {
    Integer lhs = *rep.e * *rep.f;
    for (int i = 0; i < *rep.delta; ++i) lhs *= p;
    rep.int3 = lhs == ext.field_degree;
  }
  if (!st.verdict.consistent) rep.caveats.push_back("alignment: " + st.verdict.str());
  if (ld.applicable) rep.caveats.push_back("local degree computed at the given pair, not a stabilized one");
  return rep;
}

std::optional<Value> candidate_value(const Candidate& c, const RingElem& f) {
  auto e = estimate(c, f);
  if (!e || !e->exact) return std::nullopt;
  return e->v;
}

SplittingReport splitting_report(const std::vector<NamedCandidate>& candidates, const ExtensionMap& ext,
                                 const GenSeq& gR, const SplittingOptions& opt) {
  SplittingReport rep;
  std::mt19937_64 rng(opt.seed);
  const CtxPtr& S = ext.target;
  const Value bound(opt.value_bound);

  // Test elements of R: key images and bounded random samples.
  std::vector<std::pair<RingElem, Value>> tests;
  for (std::size_t j = 0; j < gR.size(); ++j) tests.push_back({gR.key(j), gR.beta(j)});
  for (int n = 0; n < opt.samples; ++n) {
    RingElem h = random_elem(gR.ctx(), rng, 3, 2);
    if (h.is_zero()) continue;
    try {
      Value v = gR.evaluate(h);
      if (!(v > bound)) tests.push_back({h, v});
    } catch (const Error& e) {
      if (e.kind != ErrorKind::InsufficientData) throw;
    }
  }

  std::vector<std::size_t> good;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& nc = candidates[i];
    CandidateCheck ck;
    ck.name = nc.name;
    auto vx = estimate(nc.valuation, RingElem::x(S)), vy = estimate(nc.valuation, RingElem::y(S));
    ck.dominates = vx && vy && vx->v > Value() && vy->v > Value();
    if (!ck.dominates) {
      ck.diagnosis = "does not dominate S: values of the parameters are " + estimate_str(vx) + ", " + estimate_str(vy);
      rep.candidates.push_back(ck);
      continue;
    }
    ck.restricts = true;
    for (const auto& [h, v] : tests) {
      auto w = estimate(nc.valuation, ext(h));
      ++ck.tested;
      if (!w || (!w->exact && !(w->v > v))) {
        ++ck.undecided;
        continue;
      }
      if (differ(w, Estimate{v, true})) {
        ck.restricts = false;
        ck.diagnosis = "value of " + h.str() + " is " + estimate_str(w) + ", expected " + str(v);
        break;
      }
    }
    if (ck.restricts) good.push_back(i);
    rep.candidates.push_back(ck);
  }

  // Elements of S that may separate candidates.
  std::vector<RingElem> probes{RingElem::x(S), RingElem::y(S)};
  for (const auto& nc : candidates) {
    if (const auto* g = std::get_if<GenSeq>(&nc.valuation)) {
      for (std::size_t j = 2; j < g->size(); ++j) probes.push_back(g->key(j));
    } else if (auto t = truncation(std::get<SeriesEmbedding>(nc.valuation))) {
      probes.push_back(*t);
    }
  }
  for (int n = 0; n < opt.samples / 2; ++n) {
    RingElem h = random_elem(S, rng, 3, 2);
    if (!h.is_zero()) probes.push_back(h);
  }

  std::vector<std::size_t> reps;  // representative candidate of each class
  for (std::size_t i : good) {
    bool placed = false;
    for (std::size_t c = 0; c < reps.size() && !placed; ++c) {
      bool separated = false;
      for (const auto& pr : probes) {
        auto a = estimate(candidates[reps[c]].valuation, pr), b = estimate(candidates[i].valuation, pr);
        if (differ(a, b)) {
          rep.witnesses.push_back(candidates[reps[c]].name + " vs " + candidates[i].name + ": " + pr.str() + " has " +
                                  estimate_str(a) + " and " + estimate_str(b));
          separated = true;
          break;
        }
      }
      if (!separated) {
        rep.classes[c].push_back(candidates[i].name);
        placed = true;
      }
    }
    if (!placed) {
      reps.push_back(i);
      rep.classes.push_back({candidates[i].name});
    }
  }
  return rep;
}

}  // namespace valtool
