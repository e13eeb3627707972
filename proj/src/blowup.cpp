#include "valtool/blowup.hpp"

#include <cctype>

namespace valtool {

namespace {

std::string bump(const std::string& name) {
  std::size_t cut = name.size();
  while (cut > 0 && std::isdigit(static_cast<unsigned char>(name[cut - 1]))) --cut;
  int k = cut < name.size() ? std::stoi(name.substr(cut)) : 0;
  return name.substr(0, cut) + std::to_string(k + 1);
}

RingElem recenter_y(const CtxPtr& c, const TowerElem& center) {
  return RingElem::y(c) + RingElem::constant(c, center);
}

Value transported_pull_value(const Value& beta_t, const Pullback& p, const GenSeq& g, std::size_t s1) {
  return beta_t + Rational(p.K) * g.beta(0) + Rational(p.L) * g.beta(s1);
}

}  // namespace

void transform_exponents(int nbar, int w, int& a, int& b, int& eps) {
  if (nbar < 1 || w < 1) fail(ErrorKind::Precondition, "transform exponents must be positive");
  if (gcd(Integer(nbar), Integer(w)) != 1) fail(ErrorKind::Precondition, "nbar and w are not coprime");
  for (a = 0;; ++a) {
    long plus = 1L + long(w) * a, minus = long(w) * a - 1;
    if (plus % nbar == 0) {
      b = static_cast<int>(plus / nbar);
      eps = 1;
      return;
    }
    if (minus >= 0 && minus % nbar == 0) {
      b = static_cast<int>(minus / nbar);
      eps = -1;
      return;
    }
  }
}

std::array<RingElem, 2> TransformMap::images() const {
  RingElem Y = recenter_y(target, center);
  RingElem X = RingElem::x(target);
  RingElem xi = X.pow(static_cast<unsigned>(nbar)) * Y.pow(static_cast<unsigned>(a));
  RingElem yb = X.pow(static_cast<unsigned>(w)) * Y.pow(static_cast<unsigned>(b));
  RingElem sh = substitute(shift, {xi, RingElem::y(target)});
  return {xi, yb - sh};
}

std::array<std::string, 2> TransformMap::inverse_monomials() const {
  std::string yb = shift.is_zero() ? source->names[1] : "(" + (RingElem::y(source) + shift).str() + ")";
  auto mono = [&](int ex, int ey) {
    std::string s;
    auto part = [&](const std::string& v, int e) {
      if (!e) return;
      if (!s.empty()) s += "*";
      s += v + (e == 1 ? "" : "^" + std::to_string(e));
    };
    part(source->names[0], ex * eps);
    part(yb, ey * eps);
    return s;
  };
  std::string y1 = target->names[1];
  if (!center.is_zero()) {
    std::string c = center.str();
    y1 += c[0] == '-' ? " - " + c.substr(1) : " + " + c;
  }
  return {target->names[0] + " = " + mono(b, -a), y1 + " = " + mono(-w, nbar)};
}

ExtensionMap TransformMap::as_extension() const {
  return ExtensionMap(source, images(), 1, source->tower->characteristic(), true);
}

StrictTransform strict_transform_data(const RingElem& f, const TransformMap& m) {
  if (f.is_zero()) fail(ErrorKind::Precondition, "strict transform of zero");
  const CtxPtr& c = m.target;
  RingElem X = RingElem::x(c), Y = RingElem::y(c);
  RingElem xi = X.pow(static_cast<unsigned>(m.nbar)) * Y.pow(static_cast<unsigned>(m.a));
  RingElem sh = substitute(m.shift, {xi, Y});
  RingElem yi = X.pow(static_cast<unsigned>(m.w)) * Y.pow(static_cast<unsigned>(m.b)) - sh;
  RingElem img = substitute(f, {xi, yi});
  StrictTransform out;
  Mono low = img.min_exponents();
  out.lambda = low.i;
  out.mu = low.j;
  RingElem h = img.shifted(-low.i, -low.j);
  h = substitute(h, {X, recenter_y(c, m.center)});
  const auto& lead = h.terms().begin()->second;
  out.unit = TowerElem(c->tower, lead);
  out.st = h.scaled(c->tower->inv(c->tower->levels(), lead));
  return out;
}

Pullback pullback(const RingElem& h, const TransformMap& m) {
  const TowerPtr& T = h.ctx()->tower;
  CtxPtr lc = make_ctx(T, {m.source->names[0], "ybar"});
  RingElem X1 = RingElem::monomial(lc, m.b * m.eps, -m.a * m.eps);
  RingElem Y1 = RingElem::monomial(lc, -m.w * m.eps, m.nbar * m.eps) - RingElem::constant(lc, m.center.embed(T));
  RingElem l = substitute_laurent(h, {X1, Y1});
  Pullback out;
  Mono low = l.min_exponents();
  out.K = -low.i;
  out.L = -low.j;
  RingElem H = l.shifted(out.K, out.L);
  CtxPtr sc = make_ctx(T, m.source->names);
  RingElem ybar = RingElem::y(sc) + m.shift.embed(sc);
  out.poly = substitute(H, {RingElem::x(sc), ybar});
  return out;
}

namespace {

std::vector<int> sigma_exps(const std::vector<int>& a, std::size_t n) {
  std::vector<int> out(n, 0);
  for (std::size_t k = 0; k < a.size() && k < n; ++k) out[k] = a[k];
  return out;
}

}  // namespace

FreeTransform free_transform(const GenSeq& g) {
  auto sig = g.sigma_indices();
  if (sig.size() < 2) fail(ErrorKind::InsufficientKeys, "insufficient keys: no jump in the provided prefix");
  const std::size_t s1 = sig[1], r = g.last();
  if (r < s1 + 1) fail(ErrorKind::InsufficientKeys, "insufficient keys: need a key after " + g.key_name(s1));
  const KeyInfo& I = g.info(s1);

  TransformMap m;
  m.source = g.ctx();
  m.sigma1 = s1;
  m.nbar = I.nbar->convert_to<int>();
  m.w = I.w[0];
  transform_exponents(m.nbar, m.w, m.a, m.b, m.eps);
  TowerPtr T1 = g.residue_tower()->prefix(I.field_levels);
  m.center = TowerElem(T1, *I.alpha).pow(m.eps);
  m.shift = g.key(s1) - RingElem::y(g.ctx());
  auto prov = g.ctx()->provenance;
  prov.push_back("free transform of (" + g.ctx()->names[0] + ", " + g.ctx()->names[1] + ") at " + g.key_name(s1) +
                 ": a=" + std::to_string(m.a) + " b=" + std::to_string(m.b) + " eps=" + std::to_string(m.eps));
  m.target = make_ctx(T1, {bump(g.ctx()->names[0]), bump(g.ctx()->names[1])}, prov);

  FreeTransform out{m, GenSeq::build(GenSeqSpec{m.target, 1, 1, {}, {}, {}}), {}, {}};
  ValidationReport& rep = out.checks;

  const std::size_t mm = r - s1;
  std::vector<Value> bt(mm + 1);
  bt[0] = Rational(1, m.nbar) * g.beta(0);
  Integer N = 1;
  for (std::size_t i = 1; i <= mm; ++i) {
    const KeyInfo& Ik = g.info(s1 + i - 1);
    N *= *Ik.n;
    bt[i] = g.beta(s1 + i) - Rational(Integer(m.w) * N) * bt[0];
  }
  rep.add("x1 value", bt[0] > Value(), str(bt[0]));

  GenSeqSpec spec{m.target, bt[0], bt[1], {}, {}, {}};
  std::vector<Pullback> pulls{pullback(RingElem::x(m.target), m)};
  std::vector<Value> pv{transported_pull_value(bt[0], pulls[0], g, s1)};
  const TowerPtr& Ws = g.residue_tower();
  bool grown = false;

  auto rho = [&](std::size_t k) {
    auto mk = g.represent(pv[k]);
    if (!mk) fail(ErrorKind::Inconsistent, "transported value " + str(pv[k]) + " is not in the semigroup");
    TowerElem res = g.residue_over(pulls[k].poly, *mk);
    if (res.is_zero()) fail(ErrorKind::Inconsistent, "transported value of target key " + std::to_string(k) + " not attained");
    return std::make_pair(res.embed(Ws), *mk);
  };

  for (std::size_t i = 1; i <= mm; ++i) {
    auto [Gopt, grep] = GenSeq::validate(spec);
    for (const auto& c : grep.checks)
      if (!c.pass) fail(ErrorKind::Inconsistent, "target " + c.name + ": " + c.detail);
    if (!Gopt) fail(ErrorKind::Inconsistent, "target sequence could not be derived");
    const GenSeq& G = *Gopt;
    pulls.push_back(pullback(G.key(i), m));
    pv.push_back(transported_pull_value(bt[i], pulls[i], g, s1));
    const KeyInfo& J = G.info(i);
    if (!J.nbar) {
      if (i < mm) fail(ErrorKind::Inconsistent, "target index infinite before the last key");
      break;
    }
    int nb = J.nbar->convert_to<int>();
    TowerElem alpha;
    try {
      auto [ri, mi] = rho(i);
      alpha = ri.pow(nb);
      std::vector<int> mono = sigma_exps(mi, g.size());
      for (auto& e : mono) e *= nb;
      mono[0] -= nb * pulls[i].K;
      mono[s1] -= nb * pulls[i].L;
      for (std::size_t k = 0; k < i; ++k) {
        if (J.w[k] == 0) continue;
        auto [rk, mk] = rho(k);
        alpha = alpha / rk.pow(J.w[k]);
        for (std::size_t j = 0; j < mk.size(); ++j) mono[j] -= J.w[k] * mk[j];
        mono[0] += J.w[k] * pulls[k].K;
        mono[s1] += J.w[k] * pulls[k].L;
      }
      alpha = alpha * g.residue_of_monomial(mono).embed(Ws);
    } catch (const Error& e) {
      if (e.kind != ErrorKind::InsufficientData) throw;
      if (i < mm) fail(ErrorKind::InsufficientKeys, std::string("insufficient keys: ") + e.what());
      rep.add("target residue of last key", true, "unknown: source data exhausted");
      break;
    }
    auto in1 = Ws->drop(Ws->levels(), T1->levels(), alpha.coords());
    const TowerPtr& Gt = G.residue_tower();
    if (i == mm) {
      if (in1) {
        spec.closure_poly = {Gt->neg(Gt->levels(), Gt->lift(T1->levels(), Gt->levels(), *in1)),
                             Gt->constant(Gt->levels(), 1)};
      } else if (!grown) {
        spec.closure_poly = minimal_polynomial(alpha, T1->levels());
      } else {
        rep.add("target residue of last key", true, "outside the supported residue field");
      }
      rep.add("target residue of last key", true, alpha.str());
      break;
    }
    KeyStep st;
    st.beta = bt[i + 1];
    if (in1) {
      if (grown) fail(ErrorKind::Precondition, "residue field growth inside a transform is supported once, at the end");
      st.n = nb;
      std::vector<int> sigma = J.w;
      sigma.push_back(0);
      st.tail.push_back({T1->neg(T1->levels(), *in1), sigma});
    } else {
      if (grown) fail(ErrorKind::Precondition, "residue field growth inside a transform is supported once");
      UPoly f = minimal_polynomial(alpha, T1->levels());
      int d = static_cast<int>(f.size()) - 1;
      st.n = nb * d;
      Value u = G.monomial_value(J.w);
      for (int t = 0; t < d; ++t) {
        if (Tower::is_zero(f[static_cast<std::size_t>(t)])) continue;
        auto Rt = G.represent(Rational(d - t) * u, i - 1);
        if (!Rt) fail(ErrorKind::Inconsistent, "no reduced monomial for a power of U");
        std::vector<int> q(J.w.size());
        for (std::size_t k = 0; k < q.size(); ++k) q[k] = (d - t) * J.w[k] - (*Rt)[k];
        TowerElem res = G.residue_of_monomial(q);
        auto c = T1->mul(T1->levels(), f[static_cast<std::size_t>(t)], *Gt->drop(Gt->levels(), T1->levels(), res.coords()));
        std::vector<int> sigma = *Rt;
        sigma.push_back(t * nb);
        st.tail.push_back({c, sigma});
      }
      grown = true;
    }
    spec.steps.push_back(st);
  }

  out.target = GenSeq::build(spec);
  const GenSeq& tg = out.target;

  for (std::size_t k = 1; k < pulls.size() && k < tg.size(); ++k) {
    try {
      Value v = g.evaluate(pulls[k].poly);
      rep.add("target key " + tg.key_name(k) + " pullback value", v == pv[k], str(v) + " vs " + str(pv[k]));
    } catch (const Error& e) {
      if (e.kind != ErrorKind::InsufficientData) throw;
      rep.add("target key " + tg.key_name(k) + " pullback value", true, "unverified: source data exhausted");
    }
  }

  std::size_t dd = g.ctx()->tower->dim() ? T1->dim() / g.ctx()->tower->dim() : 0;
  rep.add("residue degree", I.d && static_cast<std::size_t>(*I.d) == dd,
          std::to_string(dd) + " vs d = " + (I.d ? std::to_string(*I.d) : "?"));

  for (std::size_t i = 1; i < tg.size(); ++i) {
    ShiftRow row;
    row.i = i;
    row.nbar_t = tg.info(i).nbar;
    row.nbar_s = g.info(s1 + i).nbar;
    row.d_t = tg.info(i).d;
    row.d_s = g.info(s1 + i).d;
    row.n_t = tg.info(i).n;
    row.n_s = g.info(s1 + i).n;
    row.ok = row.nbar_t == row.nbar_s && (!row.d_t || !row.d_s || row.d_t == row.d_s) &&
             (!row.n_t || !row.n_s || row.n_t == row.n_s);
    out.shifts.push_back(row);
    rep.add("shift identities at " + std::to_string(i), row.ok);
  }

  for (std::size_t k = 0; k < sig.size(); ++k) {
    std::size_t si = sig[k];
    StrictTransform s = strict_transform_data(g.key(si), m);
    if (k <= 1) {
      rep.add("strict transform of " + g.key_name(si) + " is a unit", s.st.is_unit());
      continue;
    }
    std::size_t tk = si - s1;
    if (tk >= tg.size()) continue;
    Value v = g.beta(si) - Rational(s.lambda) * bt[0];
    rep.add("strict transform of " + g.key_name(si) + " value", v == tg.beta(tk),
            str(v) + " vs " + str(tg.beta(tk)));
    RingElem x0 = s.st;
    RingElem q = tg.key(tk);
    TowerElem cs = s.st.coefficient(0, q.deg_y()), cq = q.coefficient(0, q.deg_y());
    bool divisible = false;
    if (!cs.is_zero()) {
      RingElem diff = s.st - q.scaled((cs / cq).coords());
      divisible = diff.is_zero() || diff.min_exponents().i >= 1;
    }
    rep.add("strict transform of " + g.key_name(si) + " mod x1", true,
            divisible ? "matches target key" : "differs from target key modulo x1");
  }
  return out;
}

ChainRecord iterate_transforms(const GenSeq& g, int count) {
  ChainRecord rec;
  const GenSeq* cur = &g;
  for (int k = 0; k < count; ++k) {
    try {
      rec.steps.push_back(free_transform(*cur));
    } catch (const Error& e) {
      if (e.kind != ErrorKind::InsufficientKeys) throw;
      rec.stop_reason = e.what();
      break;
    }
    cur = &rec.steps.back().target;
  }
  return rec;
}

Lemma1Data lemma1_check(const GenSeq& g, const TransformMap& m, std::size_t i, const std::vector<int>& a) {
  auto sig = g.sigma_indices();
  auto nprod = [&](std::size_t upto) {
    long p = 1;
    for (std::size_t j = 1; j < upto; ++j) p *= *g.info(sig[j]).n;
    return p;
  };
  Lemma1Data d;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0) continue;
    long coef = j == 0 ? m.nbar : long(m.w) * nprod(j);
    d.t += coef * a[j];
  }
  d.lambda = i == 0 ? m.nbar : long(m.w) * nprod(i);
  bool only_x = a.size() >= 1 && a[0] == 1;
  for (std::size_t j = 1; j < a.size(); ++j)
    if (a[j]) only_x = false;
  d.exceptional = i == 1 && only_x && m.nbar == 1 && m.w == 1;
  d.holds = d.t > d.lambda || (d.exceptional && d.t == d.lambda);
  return d;
}

}  // namespace valtool
