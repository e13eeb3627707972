#include "valtool/genseq.hpp"

#include "valtool/expr.hpp"

#include <algorithm>
#include <functional>

namespace valtool {

namespace {

std::string exps(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) { return a < b; }

}  // namespace

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void ValidationReport::add(std::string name, bool pass, std::string detail) {
  checks.push_back({std::move(name), pass, std::move(detail)});
}

std::string GenSeq::key_name(std::size_t j) const {
  if (j < 2) return ctx_->names[j];
  return "P" + std::to_string(j);
}

bool GenSeq::terminated() const {
  const KeyInfo& I = info_.back();
  return keys_.size() > 1 && (!I.nbar || I.transcendental);
}

Value GenSeq::monomial_value(const std::vector<int>& a) const {
  Value v;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j]) v += Rational(a[j]) * betas_.at(j);
  return v;
}

std::optional<std::vector<int>> GenSeq::represent(const Value& gamma, std::size_t upto) const {
  std::vector<int> a(upto + 1, 0);
  std::function<bool(std::size_t, const Value&)> rec = [&](std::size_t j, const Value& g) -> bool {
    if (g < Value()) return false;
    if (j == 0) {
      auto q = value_ratio(g, betas_[0]);
      if (!q || !is_integer(*q) || *q < 0) return false;
      a[0] = numer(*q).convert_to<int>();
      return true;
    }
    std::vector<Value> lower(betas_.begin(), betas_.begin() + static_cast<std::ptrdiff_t>(j));
    const KeyInfo& I = info_[j];
    long cap = I.n ? *I.n - 1 : (1L << 30);
    long upper = floor_div(g, betas_[j], cap);
    if (upper < 0) return false;
    std::vector<long> cands;
    if (I.nbar) {
      long step = I.nbar->convert_to<long>();
      for (long a0 = 0; a0 < step && a0 <= upper; ++a0) {
        if (!in_group(g - Rational(a0) * betas_[j], lower)) continue;
        for (long v = a0; v <= upper; v += step) cands.push_back(v);
        break;
      }
    } else {
      for (long v = 0; v <= upper; ++v)
        if (in_group(g - Rational(v) * betas_[j], lower)) {
          cands.push_back(v);
          break;
        }
    }
    for (auto it = cands.rbegin(); it != cands.rend(); ++it) {
      a[j] = static_cast<int>(*it);
      if (rec(j - 1, g - Rational(*it) * betas_[j])) return true;
    }
    a[j] = 0;
    return false;
  };
  if (!rec(upto, gamma)) return std::nullopt;
  return a;
}

TowerElem GenSeq::residue_of_monomial(const std::vector<int>& m0) const {
  if (m0.size() > size()) fail(ErrorKind::Precondition, "monomial has more exponents than keys");
  std::vector<int> m = m0;
  m.resize(size(), 0);
  if (!(monomial_value(m) == Value()))
    fail(ErrorKind::Precondition, "residue of a monomial of nonzero value " + str(monomial_value(m)));
  const Tower& t = *residue_;
  const auto K = t.levels();
  Coords res = t.constant(K, 1);
  for (std::size_t j = size() - 1; j >= 1; --j) {
    if (m[j] == 0) continue;
    const KeyInfo& I = info_[j];
    if (!I.nbar) fail(ErrorKind::Internal, "value-zero monomial involves a key of infinite index");
    int nb = I.nbar->convert_to<int>();
    if (m[j] % nb != 0) fail(ErrorKind::Internal, "lattice solve failed for residue of " + exps(m0));
    int s = m[j] / nb;
    m[j] = 0;
    for (std::size_t k = 0; k < j; ++k) m[k] += s * I.w[k];
    if (!I.alpha) fail(ErrorKind::InsufficientData, "insufficient generating-sequence data: residue of " + key_name(j) + " unknown");
    Coords a = t.lift(I.field_levels, K, *I.alpha);
    res = t.mul(K, res, t.pow(K, a, s));
  }
  if (m[0] != 0) fail(ErrorKind::Internal, "lattice solve failed for residue of " + exps(m0));
  return TowerElem(residue_, res);
}

TowerPtr GenSeq::working_tower(const TowerPtr& t) const {
  if (t->is_prefix_of(*residue_)) return residue_;
  if (residue_->is_prefix_of(*t)) return t;
  fail(ErrorKind::Precondition, "coefficient field is incompatible with the residue field");
}

PAdicExpansion GenSeq::expand(const RingElem& f0) const {
  if (!(f0.ctx()->tower->is_prefix_of(*residue_) || residue_->is_prefix_of(*f0.ctx()->tower)))
    fail(ErrorKind::Precondition, "element is not over this ring's field");
  if (!f0.is_polynomial()) fail(ErrorKind::Precondition, "expansion of a Laurent polynomial");
  // Expansion stays in f's own field when it contains the ring's coefficients.
  TowerPtr W = ctx_->tower->is_prefix_of(*f0.ctx()->tower) ? f0.ctx()->tower : ctx_->tower;
  CtxPtr wc = W == f0.ctx()->tower ? f0.ctx() : make_ctx(W, f0.ctx()->names);
  RingElem f = f0.embed(wc);
  const std::size_t r = last();
  std::vector<std::size_t> used;
  for (std::size_t j = 1; j < r; ++j)
    if (info_[j].n && *info_[j].n > 1) used.push_back(j);
  if (r >= 1) used.push_back(r);
  std::vector<RingElem> keys;
  for (const auto& k : keys_) keys.push_back(k.embed(wc));

  PAdicExpansion out;
  out.tower = W;
  std::vector<int> a(size(), 0);
  std::function<void(const RingElem&, std::ptrdiff_t)> rec = [&](const RingElem& g, std::ptrdiff_t li) {
    if (g.is_zero()) return;
    if (li < 0) {
      for (const auto& [mono, c] : g.terms()) {
        if (mono.j != 0) fail(ErrorKind::Internal, "expansion left a y-term");
        a[0] = mono.i;
        out.terms.push_back({c, a, monomial_value(a)});
      }
      a[0] = 0;
      return;
    }
    std::size_t m = used[static_cast<std::size_t>(li)];
    RingElem q = g;
    int e = 0;
    while (!q.is_zero()) {
      auto [quot, rem] = divmod_y(q, keys[m]);
      a[m] = e;
      rec(rem, li - 1);
      q = std::move(quot);
      ++e;
    }
    a[m] = 0;
  };
  rec(f, static_cast<std::ptrdiff_t>(used.size()) - 1);
  std::sort(out.terms.begin(), out.terms.end(), [](const ExpTerm& x, const ExpTerm& y) {
    Cmp c = value_cmp(x.value, y.value);
    if (c != Cmp::EQ) return c == Cmp::LT;
    return lex_less(x.a, y.a);
  });
  if (r >= 1) {
    const KeyInfo& I = info_[r];
    for (const auto& term : out.terms)
      if (I.n && term.a[r] >= *I.n) out.last_exceeds = true;
  }
  return out;
}

TowerElem GenSeq::group_residue(const PAdicExpansion& e, std::size_t count, const std::vector<int>& ref) const {
  TowerPtr W = working_tower(e.tower);
  const auto K = W->levels();
  Coords sum = W->zero(K);
  for (std::size_t l = 0; l < count; ++l) {
    std::vector<int> m = e.terms[l].a;
    for (std::size_t j = 0; j < m.size(); ++j) m[j] -= j < ref.size() ? ref[j] : 0;
    TowerElem res = residue_of_monomial(m).embed(W);
    Coords c = W->lift(e.tower->levels(), K, e.terms[l].c);
    sum = W->add(K, sum, W->mul(K, c, res.coords()));
  }
  return TowerElem(W, sum);
}

namespace {

std::size_t min_group(const PAdicExpansion& e) {
  std::size_t n = 1;
  while (n < e.terms.size() && e.terms[n].value == e.terms[0].value) ++n;
  return n;
}

}  // namespace

Value GenSeq::evaluate(const RingElem& f) const {
  if (f.is_zero()) fail(ErrorKind::Precondition, "value of zero");
  PAdicExpansion e = expand(f);
  std::size_t count = min_group(e);
  const Value& v = e.terms[0].value;
  if (count == 1) return v;
  const std::size_t r = last();
  const KeyInfo& I = info_[r];
  bool reduced = true;
  for (std::size_t l = 0; l < count; ++l) {
    if (I.n ? e.terms[l].a[r] >= *I.n : e.terms[l].a[r] != e.terms[0].a[r]) reduced = false;
  }
  if (reduced) return v;
  if (!group_residue(e, count, e.terms[0].a).is_zero()) return v;
  fail(ErrorKind::InsufficientData,
       "insufficient generating-sequence data: residues cancel at value " + str(v) + " beyond the last key");
}

TowerElem GenSeq::residue_over(const RingElem& f, const std::vector<int>& m) const {
  Value target = monomial_value(m);
  TowerPtr W = working_tower(f.tower().is_prefix_of(*residue_) ? residue_ : f.ctx()->tower);
  if (f.is_zero()) return TowerElem::zero(W);
  PAdicExpansion e = expand(f);
  Cmp c = value_cmp(e.terms[0].value, target);
  if (c == Cmp::GT) return TowerElem::zero(W);
  if (c == Cmp::LT) fail(ErrorKind::Precondition, "residue of an element of negative value");
  return group_residue(e, min_group(e), m).embed(W);
}

TowerElem GenSeq::residue_ratio(const RingElem& f, const RingElem& g) const {
  PAdicExpansion eg = expand(g);
  if (eg.terms.empty()) fail(ErrorKind::Precondition, "ratio by zero");
  std::vector<int> ref = eg.terms[0].a;
  TowerElem den = residue_over(g, ref);
  if (den.is_zero())
    fail(ErrorKind::InsufficientData, "insufficient generating-sequence data: residue of the denominator vanishes");
  TowerElem num = residue_over(f, ref);
  if (num.tower() != den.tower()) {
    if (num.tower()->is_prefix_of(*den.tower()))
      num = num.embed(den.tower());
    else
      den = den.embed(num.tower());
  }
  return num / den;
}

std::vector<std::size_t> GenSeq::sigma_indices() const {
  std::vector<std::size_t> out{0};
  for (std::size_t j = 1; j < size(); ++j)
    if (info_[j].n && *info_[j].n > 1) out.push_back(j);
  return out;
}

GenSeq GenSeq::prefix(std::size_t m) const {
  if (m < 1 || m >= size()) fail(ErrorKind::Precondition, "prefix must keep x, y and stay within the sequence");
  GenSeq g = *this;
  g.keys_.resize(m + 1);
  g.betas_.resize(m + 1);
  g.info_.resize(m + 1);
  g.spec_.steps.resize(m - 1);
  g.spec_.closure.reset();
  g.spec_.closure_poly.clear();
  std::size_t levels = ctx_->tower->levels();
  for (const auto& I : g.info_) levels = std::max(levels, I.field_levels);
  g.residue_ = residue_->prefix(levels);
  return g;
}

std::pair<std::optional<GenSeq>, ValidationReport> GenSeq::validate(const GenSeqSpec& spec,
                                                                     const SeriesEmbedding* oracle) {
  ValidationReport rep;
  GenSeq g;
  g.ctx_ = spec.ctx;
  g.spec_ = spec;
  g.residue_ = spec.ctx->tower;
  const TowerPtr& T = spec.ctx->tower;
  const auto K0 = T->levels();
  g.keys_ = {RingElem::x(spec.ctx), RingElem::y(spec.ctx)};
  g.betas_ = {spec.beta0, spec.beta1};
  for (const auto& s : spec.steps) g.betas_.push_back(s.beta);
  const std::size_t r = spec.steps.size() + 1;
  g.info_.assign(r + 1, KeyInfo{});

  bool pos = spec.beta0 > Value() && spec.beta1 > Value();
  rep.add("positive values", pos, "beta0 = " + str(spec.beta0) + ", beta1 = " + str(spec.beta1));
  if (!pos) return {std::nullopt, rep};

  for (std::size_t i = 1; i <= r; ++i) {
    KeyInfo& I = g.info_[i];
    std::string label = g.key_name(i);
    std::vector<Value> upto(g.betas_.begin(), g.betas_.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    std::vector<Value> below(g.betas_.begin(), g.betas_.begin() + static_cast<std::ptrdiff_t>(i));
    I.nbar = group_index(upto, below);
    I.field_levels = g.residue_->levels();

    if (i == r && !I.nbar) {
      I.alpha = T->constant(K0, 1);
      I.field_levels = K0;
      rep.add(label + " index", true, "infinite: the sequence terminates");
      break;
    }
    if (!I.nbar) {
      rep.add(label + " index", false, "infinite index before the last key");
      return {std::nullopt, rep};
    }
    int nb = I.nbar->convert_to<int>();
    auto U = g.represent(Rational(nb) * g.betas_[i], i - 1);
    if (!U) {
      rep.add(label + " U", false, "no reduced monomial of value " + str(Rational(nb) * g.betas_[i]));
      return {std::nullopt, rep};
    }
    I.w = *U;
    rep.add(label + " index", true, "nbar = " + std::to_string(nb) + ", U = " + exps(I.w));

    if (i == r) {
      const Tower& R = *g.residue_;
      const auto KR = R.levels();
      if (spec.closure && *spec.closure == "transcendental") {
        I.transcendental = true;
        rep.add(label + " residue", true, "declared transcendental: the sequence terminates");
      } else if (spec.closure || !spec.closure_poly.empty()) {
        UPoly f = spec.closure_poly;
        if (f.empty()) {
          MPoly p = parse_mpoly(*spec.closure, {"T"}, g.residue_);
          int top = p.empty() ? 0 : p.rbegin()->first[0];
          f.assign(static_cast<std::size_t>(top) + 1, R.zero(KR));
          for (const auto& [e, c] : p) f[static_cast<std::size_t>(e[0])] = c;
        }
        int deg = static_cast<int>(f.size()) - 1;
        if (deg < 1 || !TowerElem(g.residue_, f.back()).is_one() || Tower::is_zero(f[0])) {
          rep.add(label + " residue", false, "closure must be monic of positive degree with nonzero constant term");
          return {std::nullopt, rep};
        }
        try {
          if (deg == 1) {
            I.alpha = R.neg(KR, f[0]);
          } else {
            g.residue_ = tower_extend(g.residue_, "alpha" + std::to_string(i), f);
            I.alpha = g.residue_->generator(g.residue_->levels(), KR);
            I.field_levels = g.residue_->levels();
          }
        } catch (const Error& e) {
          rep.add(label + " residue", false, e.what());
          return {std::nullopt, rep};
        }
        I.f = f;
        I.d = deg;
        I.n = deg * nb;
        rep.add(label + " residue", true, "declared, d = " + std::to_string(deg));
      } else if (oracle) {
        const TowerPtr& O = oracle->tower();
        if (!g.residue_->is_prefix_of(*O)) {
          rep.add(label + " residue", false, "oracle field does not extend the residue field");
        } else {
          auto lp = oracle->leading(g.keys_[i]);
          bool ok = lp.has_value();
          TowerElem alpha = ok ? lp->second.pow(nb) : TowerElem();
          for (std::size_t k = 0; ok && k < i; ++k) {
            if (I.w[k] == 0) continue;
            auto lk = oracle->leading(g.keys_[k]);
            if (!lk) ok = false;
            else alpha = alpha / lk->second.pow(I.w[k]);
          }
          if (!ok) {
            rep.add(label + " residue", true, "oracle precision exhausted; residue unknown");
          } else {
            UPoly f = minimal_polynomial(alpha, KR);
            int deg = static_cast<int>(f.size()) - 1;
            if (deg == 1) {
              I.alpha = R.neg(KR, f[0]);
            } else {
              g.residue_ = tower_extend(g.residue_, "alpha" + std::to_string(i), f);
              I.alpha = g.residue_->generator(g.residue_->levels(), KR);
              I.field_levels = g.residue_->levels();
            }
            I.f = f;
            I.d = deg;
            I.n = deg * nb;
            I.from_oracle = true;
            rep.add(label + " residue", true, "from oracle: " + alpha.str() + ", d = " + std::to_string(deg));
          }
        }
      }
      break;
    }

    const KeyStep& st = spec.steps[i - 1];
    std::string next = g.key_name(i + 1);
    if (st.n < 1 || st.n % nb != 0) {
      rep.add(next + " degree", false, "nbar = " + std::to_string(nb) + " does not divide n = " + std::to_string(st.n));
      return {std::nullopt, rep};
    }
    int d = st.n / nb;
    Value target = Rational(st.n) * g.betas_[i];
    bool shape_ok = true, value_ok = true, div_ok = true;
    std::string shape_msg, value_msg, div_msg;
    for (const auto& tt : st.tail) {
      std::vector<int> s = tt.sigma;
      bool ok = s.size() == i + 1 && !Tower::is_zero(tt.c);
      for (std::size_t k = 0; ok && k <= i; ++k) {
        if (s[k] < 0) ok = false;
        if (k == i && s[k] >= st.n) ok = false;
        if (k >= 1 && k < i && (!g.info_[k].n || s[k] >= *g.info_[k].n)) ok = false;
      }
      if (!ok) {
        shape_ok = false;
        shape_msg = "term " + exps(s);
        continue;
      }
      Value v = g.monomial_value(s);
      if (!(v == target)) {
        value_ok = false;
        value_msg = "term " + exps(s) + " has value " + str(v) + " != " + str(target);
      }
      if (s[i] % nb != 0) {
        div_ok = false;
        div_msg = "exponent " + std::to_string(s[i]) + " of " + label;
      }
    }
    rep.add(next + " tail exponents", shape_ok, shape_msg);
    rep.add(next + " tail value", value_ok, value_msg);
    rep.add(next + " tail divisibility", div_ok, div_msg);
    bool grows = g.betas_[i + 1] > target;
    rep.add(next + " value growth", grows,
            str(g.betas_[i + 1]) + (grows ? " > " : " <= ") + str(target) + " = n*beta");
    if (st.tail.empty()) {
      rep.add(next + " tail", false, "empty tail");
      return {std::nullopt, rep};
    }
    if (!shape_ok || !value_ok || !div_ok) return {std::nullopt, rep};

    // f_i(T) = T^d + sum b_t T^t with b_t = [sum c * P^sigma' / U^(d-t)].
    const TowerPtr Rt = g.residue_;
    const auto KR = Rt->levels();
    UPoly f(static_cast<std::size_t>(d) + 1, Rt->zero(KR));
    f[static_cast<std::size_t>(d)] = Rt->constant(KR, 1);
    for (const auto& tt : st.tail) {
      int t = tt.sigma[i] / nb;
      std::vector<int> m(tt.sigma.begin(), tt.sigma.begin() + static_cast<std::ptrdiff_t>(i));
      for (std::size_t k = 0; k < i; ++k) m[k] -= (d - t) * I.w[k];
      TowerElem res = g.residue_of_monomial(m);
      Coords c = Rt->lift(K0, KR, tt.c);
      f[static_cast<std::size_t>(t)] = Rt->add(KR, f[static_cast<std::size_t>(t)], Rt->mul(KR, c, res.coords()));
    }
    if (Tower::is_zero(f[0])) {
      rep.add(label + " residue", false, "minimal polynomial has zero constant term");
      return {std::nullopt, rep};
    }
    try {
      if (d == 1) {
        I.alpha = Rt->neg(KR, f[0]);
      } else {
        g.residue_ = tower_extend(Rt, "alpha" + std::to_string(i), f);
        I.alpha = g.residue_->generator(g.residue_->levels(), KR);
        I.field_levels = g.residue_->levels();
      }
    } catch (const Error& e) {
      rep.add(label + " residue", false, std::string("minimal polynomial: ") + e.what());
      return {std::nullopt, rep};
    }
    I.f = f;
    I.d = d;
    I.n = st.n;
    bool assumed = d > 1 && g.residue_->level(g.residue_->levels() - 1).assumed;
    rep.add(label + " residue", true,
            "f = " + Rt->format_poly(KR, f, "T") + ", d = " + std::to_string(d) +
                (assumed ? " (irreducibility assumed)" : ""));

    RingElem next_key = g.keys_[i].pow(static_cast<unsigned>(st.n));
    for (const auto& tt : st.tail) {
      RingElem mono = RingElem::constant(spec.ctx, TowerElem(T, tt.c));
      for (std::size_t k = 0; k <= i; ++k)
        if (tt.sigma[k]) mono *= g.keys_[k].pow(static_cast<unsigned>(tt.sigma[k]));
      next_key += mono;
    }
    g.keys_.push_back(std::move(next_key));
  }

  if (oracle) {
    for (std::size_t j = 0; j < g.keys_.size(); ++j) {
      auto v = oracle->value(g.keys_[j]);
      if (!v)
        rep.add(g.key_name(j) + " oracle value", true, "oracle precision exhausted");
      else
        rep.add(g.key_name(j) + " oracle value", *v == g.betas_[j], str(*v) + " vs " + str(g.betas_[j]));
    }
    const TowerPtr& O = oracle->tower();
    for (std::size_t j = 1; j + 1 < g.keys_.size(); ++j) {
      const KeyInfo& I = g.info_[j];
      if (!I.alpha || I.field_levels > K0 || !T->is_prefix_of(*O)) continue;
      auto lp = oracle->leading(g.keys_[j]);
      if (!lp) continue;
      TowerElem alpha = lp->second.pow(I.nbar->convert_to<long>());
      bool ok = true;
      for (std::size_t k = 0; k < j; ++k) {
        if (I.w[k] == 0) continue;
        auto lk = oracle->leading(g.keys_[k]);
        if (!lk) ok = false;
        else alpha = alpha / lk->second.pow(I.w[k]);
      }
      if (!ok) continue;
      TowerElem mine = TowerElem(T, T->lift(I.field_levels, K0, *I.alpha)).embed(O);
      rep.add(g.key_name(j) + " oracle residue", mine == alpha, mine.str() + " vs " + alpha.str());
    }
  }
  return {std::move(g), rep};
}

GenSeq GenSeq::build(const GenSeqSpec& spec, const SeriesEmbedding* oracle) {
  auto [g, rep] = validate(spec, oracle);
  for (const auto& c : rep.checks)
    if (!c.pass) fail(ErrorKind::Inconsistent, c.name + ": " + c.detail);
  if (!g) fail(ErrorKind::Inconsistent, "generating sequence could not be derived");
  return std::move(*g);
}

}  // namespace valtool
