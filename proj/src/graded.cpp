#include "valtool/graded.hpp"

#include "valtool/linalg.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace valtool {

namespace {

constexpr std::size_t kMaxCandidates = 20000;

TowerPtr larger(const TowerPtr& a, const TowerPtr& b) {
  if (a->is_prefix_of(*b)) return b;
  if (b->is_prefix_of(*a)) return a;
  fail(ErrorKind::Precondition, "coefficient fields are incompatible");
}

Coords lift_to(const TowerPtr& from, const TowerPtr& to, const Coords& c) {
  return to->lift(from->levels(), to->levels(), c);
}

std::size_t min_group(const PAdicExpansion& e) {
  std::size_t n = e.terms.empty() ? 0 : 1;
  while (n < e.terms.size() && e.terms[n].value == e.terms[0].value) ++n;
  return n;
}

std::string power(const std::string& base, int e) { return e == 1 ? base : base + "^" + std::to_string(e); }

std::string coef_prefix(const Tower& t, const Coords& c, bool first) {
  Coords one = t.constant(t.levels(), 1);
  if (c == one) return first ? "" : " + ";
  if (c == t.neg(t.levels(), one)) return first ? "-" : " - ";
  std::string s = t.format(c);
  bool wrap = s.find_first_of("+-", 1) != std::string::npos;
  if (wrap) s = "(" + s + ")";
  return (first ? "" : " + ") + s + "*";
}

// Levels of the residue tower generated by the residues of keys 1..j.
std::size_t residue_levels(const GenSeq& g, std::size_t j) {
  std::size_t lv = g.ctx()->tower->levels();
  for (std::size_t k = 1; k <= j && k < g.size(); ++k)
    if (g.info(k).alpha) lv = std::max(lv, g.info(k).field_levels);
  return lv;
}

std::optional<Integer> dim_ratio(std::size_t big, std::size_t small) {
  if (small == 0 || big % small != 0) return std::nullopt;
  return Integer(big / small);
}

std::vector<Value> pick(const GenSeq& g, const std::vector<std::size_t>& idx, std::size_t count) {
  std::vector<Value> out;
  for (std::size_t i = 0; i < count && i < idx.size(); ++i) out.push_back(g.beta(idx[i]));
  return out;
}

// [G(big) + G(small) : G(small)]; finite prefixes of the two sides need not nest.
std::optional<Integer> joined_index(std::vector<Value> big, const std::vector<Value>& small) {
  big.insert(big.end(), small.begin(), small.end());
  return group_index(big, small);
}

// Index comparison: both known and different is a disagreement.
template <class T>
bool agree(const std::optional<T>& a, const std::optional<T>& b) {
  return !a || !b || *a == *b;
}

}  // namespace

GradedElem initial_form(const RingElem& f, const GenSeq& g) {
  Value v = g.evaluate(f);
  PAdicExpansion e = g.expand(f);
  std::size_t n = min_group(e);
  GradedElem out{v, e.tower, {}};
  out.terms.assign(e.terms.begin(), e.terms.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

GradedElem graded_monomial(const GenSeq& g, std::vector<int> a) {
  a.resize(g.size(), 0);
  const TowerPtr& t = g.ctx()->tower;
  Value v = g.monomial_value(a);
  return {v, t, {{t->constant(t->levels(), 1), std::move(a), v}}};
}

GradedElem graded_mul(const GradedElem& a, const GradedElem& b) {
  TowerPtr W = larger(a.tower, b.tower);
  const auto K = W->levels();
  std::map<std::vector<int>, Coords> acc;
  for (const auto& s : a.terms)
    for (const auto& t : b.terms) {
      std::vector<int> e(std::max(s.a.size(), t.a.size()), 0);
      for (std::size_t j = 0; j < s.a.size(); ++j) e[j] += s.a[j];
      for (std::size_t j = 0; j < t.a.size(); ++j) e[j] += t.a[j];
      Coords c = W->mul(K, lift_to(a.tower, W, s.c), lift_to(b.tower, W, t.c));
      auto it = acc.find(e);
      if (it == acc.end())
        acc.emplace(std::move(e), std::move(c));
      else
        it->second = W->add(K, it->second, c);
    }
  GradedElem out{a.value + b.value, W, {}};
  for (auto& [e, c] : acc)
    if (!Tower::is_zero(c)) out.terms.push_back({std::move(c), e, out.value});
  return out;
}

GradedElem graded_pow(const GradedElem& a, int e, const GenSeq& g) {
  GradedElem out = graded_monomial(g, {});
  for (int k = 0; k < e; ++k) out = graded_mul(out, a);
  return out;
}

std::string form_name(const GenSeq& g, std::size_t j) {
  if (j < 2) return "in(" + g.key_name(j) + ")";
  std::string p = g.key(j).str();
  return "in(" + (p.size() <= 16 ? p : g.key_name(j)) + ")";
}

std::string monomial_str(const std::vector<int>& a, const GenSeq& g) {
  std::string s;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0) continue;
    if (!s.empty()) s += "*";
    s += power(form_name(g, j), a[j]);
  }
  return s.empty() ? "1" : s;
}

std::string graded_str(const GradedElem& e, const GenSeq& g) {
  if (e.terms.empty()) return "0";
  std::string s;
  for (std::size_t k = 0; k < e.terms.size(); ++k)
    s += coef_prefix(*e.tower, e.terms[k].c, k == 0) + monomial_str(e.terms[k].a, g);
  return s;
}

bool PieceCoords::is_zero() const {
  return std::all_of(parts.begin(), parts.end(), [](const auto& p) { return Tower::is_zero(p.second); });
}

PieceCoords piece_coords(const GradedElem& e, const GenSeq& g) {
  const std::size_t r = g.last();
  const bool open = r >= 1 && !g.info(r).n;
  PieceCoords out;
  out.tower = larger(e.tower, g.residue_tower());
  const TowerPtr& W = out.tower;
  const auto K = W->levels();
  std::map<int, std::vector<int>> refs;
  for (const auto& t : e.terms) {
    if (t.a.size() > g.size()) fail(ErrorKind::Precondition, "monomial has more exponents than keys");
    std::vector<int> a = t.a;
    a.resize(g.size(), 0);
    int key = open ? a[r] : 0;
    auto it = refs.find(key);
    if (it == refs.end()) {
      Value rest = e.value - Rational(key) * g.beta(r);
      auto rep = g.represent(rest, open ? r - 1 : r);
      if (!rep) fail(ErrorKind::Internal, "no reduced monomial of value " + str(rest));
      rep->resize(g.size(), 0);
      if (open) (*rep)[r] = key;
      it = refs.emplace(key, *rep).first;
    }
    for (std::size_t j = 0; j < a.size(); ++j) a[j] -= it->second[j];
    Coords res = g.residue_of_monomial(a).embed(W).coords();
    Coords c = W->mul(K, lift_to(e.tower, W, t.c), res);
    auto pit = out.parts.find(key);
    if (pit == out.parts.end())
      out.parts.emplace(key, c);
    else
      pit->second = W->add(K, pit->second, c);
  }
  for (auto it = out.parts.begin(); it != out.parts.end();)
    it = Tower::is_zero(it->second) ? out.parts.erase(it) : std::next(it);
  return out;
}

bool graded_equal(const GradedElem& a, const GradedElem& b, const GenSeq& g) {
  if (!(a.value == b.value)) return false;
  GradedElem nb = b;
  for (auto& t : nb.terms) t.c = nb.tower->neg(nb.tower->levels(), t.c);
  GradedElem sum = a;
  TowerPtr W = larger(a.tower, b.tower);
  for (auto& t : sum.terms) t.c = lift_to(a.tower, W, t.c);
  for (auto& t : nb.terms) sum.terms.push_back({lift_to(b.tower, W, t.c), t.a, t.value});
  sum.tower = W;
  return piece_coords(sum, g).is_zero();
}

std::vector<std::size_t> graded_generators(const GenSeq& g) {
  auto out = g.sigma_indices();
  const std::size_t r = g.last();
  if (r >= 1 && !g.info(r).n && out.back() != r) out.push_back(r);
  return out;
}

GradedPresentation graded_presentation(const GenSeq& g, std::size_t depth) {
  GradedPresentation p;
  auto gens = graded_generators(g);
  p.depth = std::min(depth, gens.size() - 1);
  const TowerPtr& k = g.ctx()->tower;
  const auto K = k->levels();
  for (std::size_t i = 0; i <= p.depth; ++i) {
    std::size_t j = gens[i];
    p.generators.push_back(j);
    p.values.push_back(g.beta(j));
    if (i == 0 || j >= g.last() || !g.info(j).n || *g.info(j).n <= 1) continue;
    const KeyStep& st = g.spec().steps.at(j - 1);
    GradedRelation rel{Rational(st.n) * g.beta(j), k, {}};
    std::vector<int> lead(g.size(), 0);
    lead[j] = st.n;
    rel.terms.push_back({k->constant(K, 1), lead, rel.value});
    for (const auto& t : st.tail) {
      std::vector<int> a = t.sigma;
      a.resize(g.size(), 0);
      Value v = g.monomial_value(a);
      if (v == rel.value) rel.terms.push_back({t.c, a, v});
    }
    p.relations.push_back(std::move(rel));
  }
  return p;
}

bool relation_vanishes(const GradedRelation& rel, const GenSeq& g) {
  for (const auto& t : rel.terms)
    if (!(t.value == rel.value)) return false;
  return piece_coords(GradedElem{rel.value, rel.tower, rel.terms}, g).is_zero();
}

std::string relation_str(const GradedRelation& rel, const GenSeq& g) {
  return graded_str(GradedElem{rel.value, rel.tower, rel.terms}, g) + " = 0";
}

std::vector<std::vector<int>> graded_piece_basis(const Value& gamma, const GenSeq& g, std::size_t upto) {
  upto = std::min(upto, g.last());
  std::vector<std::vector<int>> out;
  std::vector<int> a(upto + 1, 0);
  std::function<void(std::size_t, const Value&)> rec = [&](std::size_t j, const Value& rem) {
    if (j == 0) {
      auto q = value_ratio(rem, g.beta(0));
      if (q && is_integer(*q) && *q >= 0) {
        a[0] = numer(*q).convert_to<int>();
        out.push_back(a);
      }
      return;
    }
    const KeyInfo& I = g.info(j);
    long cap = I.n ? *I.n - 1 : (1L << 30);
    long top = floor_div(rem, g.beta(j), cap);
    for (long v = 0; v <= top; ++v) {
      a[j] = static_cast<int>(v);
      rec(j - 1, rem - Rational(v) * g.beta(j));
    }
    a[j] = 0;
  };
  if (gamma >= Value()) rec(upto, gamma);
  return out;
}

std::vector<std::vector<int>> graded_piece_basis(const Value& gamma, const GenSeq& g) {
  return graded_piece_basis(gamma, g, g.last());
}

Membership subalgebra_membership(const GradedElem& e, const std::vector<GradedElem>& gens, const GenSeq& g) {
  Membership m;
  for (const auto& x : gens)
    if (!(x.value > Value())) fail(ErrorKind::Precondition, "generators of a subalgebra need positive values");

  std::vector<std::vector<int>> combos;
  std::vector<int> k(gens.size(), 0);
  auto push = [&] {
    combos.push_back(k);
    if (combos.size() > kMaxCandidates) fail(ErrorKind::Precondition, "too many monomials in the generators");
  };
  bool rational = e.value.is_rational();
  for (const auto& x : gens) rational = rational && x.value.is_rational();
  if (gens.empty()) {
    if (e.value == Value()) push();
  } else if (rational) {
    // Integer weights after clearing denominators.
    Integer den = denom(e.value.q0);
    for (const auto& x : gens) den = lcm(den, denom(x.value.q0));
    auto scaled = [&](const Value& v) { return (numer(v.q0) * (den / denom(v.q0))).convert_to<long>(); };
    std::vector<long> w;
    for (const auto& x : gens) w.push_back(scaled(x.value));
    std::function<void(std::size_t, long)> rec = [&](std::size_t i, long rem) {
      if (i + 1 == gens.size()) {
        if (rem % w[i] == 0) {
          k[i] = static_cast<int>(rem / w[i]);
          push();
          k[i] = 0;
        }
        return;
      }
      for (long v = 0; v * w[i] <= rem; ++v) {
        k[i] = static_cast<int>(v);
        rec(i + 1, rem - v * w[i]);
      }
      k[i] = 0;
    };
    long target = scaled(e.value);
    if (target >= 0) rec(0, target);
  } else {
    std::function<void(std::size_t, const Value&)> rec = [&](std::size_t i, const Value& rem) {
      if (i + 1 == gens.size()) {
        auto q = value_ratio(rem, gens[i].value);
        if (q && is_integer(*q) && *q >= 0) {
          k[i] = numer(*q).convert_to<int>();
          push();
          k[i] = 0;
        }
        return;
      }
      long top = floor_div(rem, gens[i].value, 1L << 20);
      for (long v = 0; v <= top; ++v) {
        k[i] = static_cast<int>(v);
        rec(i + 1, rem - Rational(v) * gens[i].value);
      }
      k[i] = 0;
    };
    if (e.value >= Value()) rec(0, e.value);
  }
  m.candidates = combos.size();

  PieceCoords target = piece_coords(e, g);
  if (combos.empty()) {
    m.member = target.is_zero();
    return m;
  }
  std::vector<PieceCoords> prods;
  TowerPtr W = target.tower;
  for (const auto& c : combos) {
    GradedElem p = graded_monomial(g, {});
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i]) p = graded_mul(p, graded_pow(gens[i], c[i], g));
    p.value = e.value;
    for (auto& t : p.terms) t.value = e.value;
    prods.push_back(piece_coords(p, g));
    W = larger(W, prods.back().tower);
  }
  std::set<int> keys;
  for (const auto& [key, c] : target.parts) keys.insert(key);
  for (const auto& p : prods)
    for (const auto& [key, c] : p.parts) keys.insert(key);
  std::map<int, Eigen::Index> slot;
  for (int key : keys) slot.emplace(key, static_cast<Eigen::Index>(slot.size()));
  const auto K = W->levels();
  const Eigen::Index D = static_cast<Eigen::Index>(W->dim());
  const Eigen::Index rows = static_cast<Eigen::Index>(keys.size()) * D;
  auto flatten = [&](const PieceCoords& pc, const Coords& scale) {
    Vec<Rational> v = Vec<Rational>::Constant(rows, Rational(0));
    for (const auto& [key, c] : pc.parts) {
      Coords x = W->mul(K, lift_to(pc.tower, W, c), scale);
      for (Eigen::Index t = 0; t < D; ++t) v(slot[key] * D + t) = x[static_cast<std::size_t>(t)];
    }
    return v;
  };
  const TowerPtr& kt = g.ctx()->tower;
  const std::size_t Dk = kt->dim();
  const Eigen::Index cols = static_cast<Eigen::Index>(prods.size() * Dk);
  Mat<Rational> A(rows, cols);
  for (std::size_t p = 0; p < prods.size(); ++p)
    for (std::size_t t = 0; t < Dk; ++t) {
      Coords b = kt->zero(kt->levels());
      b[t] = 1;
      A.col(static_cast<Eigen::Index>(p * Dk + t)) = flatten(prods[p], lift_to(kt, W, b));
    }
  Vec<Rational> rhs = flatten(target, W->constant(K, 1));
  const BaseField& F = W->field();
  m.rank = static_cast<long>(rank(F, A));
  Mat<Rational> aug(rows, cols + 1);
  aug.leftCols(cols) = A;
  aug.col(cols) = rhs;
  m.rank_augmented = static_cast<long>(rank(F, aug));
  auto x = solve(F, A, rhs);
  if (!x) return m;
  m.member = true;
  for (std::size_t p = 0; p < prods.size(); ++p) {
    Coords c(Dk, Rational(0));
    for (std::size_t t = 0; t < Dk; ++t) c[t] = (*x)(static_cast<Eigen::Index>(p * Dk + t));
    if (Tower::is_zero(c)) continue;
    m.monomials.push_back(combos[p]);
    m.coefficients.push_back(c);
  }
  return m;
}

std::string certificate_str(const Membership& m, const std::vector<std::string>& names, const Tower& k) {
  if (!m.member) return "not a member";
  if (m.monomials.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < m.monomials.size(); ++i) {
    std::string mono;
    for (std::size_t j = 0; j < m.monomials[i].size(); ++j) {
      if (!m.monomials[i][j]) continue;
      if (!mono.empty()) mono += "*";
      mono += power(names[j], m.monomials[i][j]);
    }
    if (mono.empty()) mono = "1";
    s += coef_prefix(k, m.coefficients[i], i == 0) + mono;
  }
  return s;
}

std::string AlignmentVerdict::str() const {
  if (consistent) return "ConsistentWithFinGen(" + std::to_string(level) + ")";
  return "ObstructionAt(" + std::to_string(level) + ", " + kind + ")";
}

AlignmentState fingen_detect(const GenSeq& gR, const GenSeq& gS, const ExtensionMap& ext, std::size_t depth) {
  AlignmentState st;
  st.r_gens = graded_generators(gR);
  st.s_gens = graded_generators(gS);

  std::vector<GradedElem> img;
  std::vector<std::string> img_names, s_names;
  for (std::size_t j : st.r_gens) {
    try {
      img.push_back(initial_form(ext(gR.key(j)), gS));
      img_names.push_back(form_name(gR, j));
    } catch (const Error& e) {
      if (e.kind != ErrorKind::InsufficientData) throw;
      st.notes.push_back("image of " + gR.key_name(j) + " undecided: " + e.what());
      break;
    }
  }
  std::vector<GradedElem> sf;
  for (std::size_t t : st.s_gens) {
    std::vector<int> a(gS.size(), 0);
    a[t] = 1;
    sf.push_back(graded_monomial(gS, a));
    s_names.push_back(form_name(gS, t));
  }

  const std::size_t smax = std::min(depth, st.s_gens.size() - 1);
  for (std::size_t s = 0; s <= smax; ++s) {
    AlignmentLevel L;
    L.s = s;
    std::vector<GradedElem> A(sf.begin(), sf.begin() + static_cast<std::ptrdiff_t>(s + 1));
    for (std::size_t j = 0; j < img.size(); ++j) {
      if (!subalgebra_membership(img[j], A, gS).member) break;
      L.r = static_cast<int>(j);
    }
    if (L.r >= 0) {
      std::size_t r = static_cast<std::size_t>(L.r);
      L.lambda = joined_index(pick(gS, st.s_gens, s + 1), pick(gR, st.r_gens, r + 1));
      L.chi = dim_ratio(gS.residue_tower()->dim(residue_levels(gS, st.s_gens[s])),
                        gR.residue_tower()->dim(residue_levels(gR, st.r_gens[r])));
      if (r + 1 < st.r_gens.size() && s + 1 < st.s_gens.size()) {
        std::size_t jr = st.r_gens[r + 1], js = st.s_gens[s + 1];
        L.matched = std::make_pair(gR.beta(jr), gS.beta(js));
        const KeyInfo &a = gR.info(jr), &b = gS.info(js);
        L.indices_agree = agree(a.nbar, b.nbar) && agree(a.d, b.d) && agree(a.n, b.n);
      }
    }
    if (s >= 1) {
      std::vector<GradedElem> gens = img;
      gens.insert(gens.end(), sf.begin(), sf.begin() + static_cast<std::ptrdiff_t>(s));
      L.new_form_member = subalgebra_membership(sf[s], gens, gS).member;
    }
    st.levels.push_back(L);
  }

  std::vector<GradedElem> all(sf.begin(), sf.begin() + static_cast<std::ptrdiff_t>(smax + 1));
  std::vector<std::string> names(s_names.begin(), s_names.begin() + static_cast<std::ptrdiff_t>(smax + 1));
  for (std::size_t j = 0; j < img.size(); ++j) {
    Membership m = subalgebra_membership(img[j], all, gS);
    if (m.member) st.image_relations.push_back(img_names[j] + " = " + certificate_str(m, names, *gS.ctx()->tower));
  }

  st.s_terminated = gS.terminated();
  st.e = joined_index(gS.betas(), gR.betas());
  st.f = dim_ratio(gS.residue_tower()->dim(residue_levels(gS, gS.last())),
                   gR.residue_tower()->dim(residue_levels(gR, gR.last())));
  const AlignmentLevel& fin = st.levels.back();
  st.int4 = fin.lambda && fin.chi && st.e && st.f && *fin.lambda * *fin.chi == *st.e * *st.f;
  st.verdict = alignment_verdict(st, smax);
  st.monotone = st.verdict.kind != "index increased";
  return st;
}

AlignmentVerdict alignment_verdict(const AlignmentState& st, std::size_t depth) {
  const std::size_t top = std::min(depth, st.levels.size() - 1);
  auto le = [](const std::optional<Integer>& a, const std::optional<Integer>& b) { return !b || (a && *a <= *b); };
  std::optional<std::size_t> bad_mono, first_fail;
  for (std::size_t s = 1; s <= top; ++s) {
    const auto &p = st.levels[s - 1], &q = st.levels[s];
    if (!(le(q.lambda, p.lambda) && le(q.chi, p.chi)) && !bad_mono) bad_mono = s;
    if (q.new_form_member && !*q.new_form_member && !first_fail) first_fail = s;
  }
  const AlignmentLevel& fin = st.levels[top];
  if (bad_mono) return {false, *bad_mono, "index increased"};
  if (first_fail && !st.s_terminated) return {false, *first_fail, "generator not in subalgebra"};
  if (fin.matched && (!(fin.matched->first == fin.matched->second) || !*fin.indices_agree))
    return {false, fin.s, "matched data differ"};
  if (fin.r < 0) return {false, fin.s, "no image in the subalgebra"};
  return {true, top, {}};
}

IntegralRelation integral_relation(const RingElem& f, const GenSeq& gR, const GenSeq& gS, const ExtensionMap& ext) {
  IntegralRelation out;
  out.value = gS.evaluate(f);
  if (!(out.value > Value())) fail(ErrorKind::Precondition, "integral relation of a unit");
  const auto& G = gR.betas();
  out.n1 = 0;
  for (int n = 1; n <= 4096; ++n)
    if (in_group(Rational(n) * out.value, G)) {
      out.n1 = n;
      break;
    }
  if (out.n1 == 0) fail(ErrorKind::Precondition, "value is not torsion over the value group of R");
  auto q = value_ratio(Rational(out.n1) * out.value, gR.beta(0));
  if (!q) fail(ErrorKind::Precondition, "value is not a rational multiple of the first value of R");
  out.b = denom(*q).convert_to<int>();
  out.a = (numer(*q)).convert_to<long>();
  const int m = out.b * out.n1;

  RingElem x = ext(gR.key(0));
  RingElem fm = f.pow(static_cast<unsigned>(m));
  RingElem xa = x.pow(static_cast<unsigned>(out.a));
  out.xi = gS.residue_ratio(fm, xa);
  const TowerPtr& kR = gR.ctx()->tower;
  const TowerPtr& W = out.xi.tower();
  if (!kR->is_prefix_of(*W)) fail(ErrorKind::Precondition, "residue field of R does not embed");
  out.minpoly = minimal_polynomial(out.xi, kR->levels());
  out.degree = out.minpoly.size() - 1;

  UPoly lifted;
  for (const auto& c : out.minpoly) lifted.push_back(W->lift(kR->levels(), W->levels(), c));
  out.residue_zero = Tower::is_zero(W->poly_eval(W->levels(), lifted, out.xi.coords()));

  // F = f^{m r} + sum_{i<r} a_i x^{a(r-i)} f^{m i}
  const TowerPtr& kS = f.ctx()->tower;
  if (!kR->is_prefix_of(*kS)) fail(ErrorKind::Precondition, "field of R does not embed in the field of S");
  const std::size_t r = out.degree;
  RingElem F(f.ctx());
  Value top = Rational(static_cast<long>(r) * out.a) * gR.beta(0);
  out.homogeneous = true;
  std::string text;
  for (std::size_t i = r + 1; i-- > 0;) {
    const Coords& c = out.minpoly[i];
    if (Tower::is_zero(c)) continue;
    RingElem term = RingElem::constant(f.ctx(), TowerElem(kS, kS->lift(kR->levels(), kS->levels(), c))) *
                    fm.pow(static_cast<unsigned>(i)) * xa.pow(static_cast<unsigned>(r - i));
    F += term;
    Value v = Rational(static_cast<long>(m * i)) * out.value + Rational(static_cast<long>(r - i) * out.a) * gR.beta(0);
    if (!(v == top)) out.homogeneous = false;
    std::string mono;
    if (i) mono += "in(f)" + (m * i == 1 ? std::string() : "^" + std::to_string(m * i));
    if (r - i) {
      if (!mono.empty()) mono += "*";
      long e = static_cast<long>(r - i) * out.a;
      mono += "in(" + gR.key_name(0) + ")" + (e == 1 ? std::string() : "^" + std::to_string(e));
    }
    text += coef_prefix(*kR, c, text.empty()) + (mono.empty() ? "1" : mono);
  }
  out.text = text + " = 0";
  if (F.is_zero()) {
    out.vanishes_in_gr = true;
  } else {
    auto ref = gS.represent(top);
    if (!ref) fail(ErrorKind::Internal, "relation value outside the semigroup of S");
    out.vanishes_in_gr = gS.residue_over(F, *ref).is_zero();
  }
  return out;
}

}  // namespace valtool
