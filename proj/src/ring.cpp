#include "valtool/ring.hpp"

#include "valtool/expr.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace valtool {

LocalRingCtx::LocalRingCtx(TowerPtr t, std::array<std::string, 2> n, std::vector<std::string> prov)
    : tower(std::move(t)), names(std::move(n)), provenance(std::move(prov)) {}

CtxPtr make_ctx(TowerPtr t, std::array<std::string, 2> names, std::vector<std::string> prov) {
  return std::make_shared<const LocalRingCtx>(std::move(t), std::move(names), std::move(prov));
}

namespace {

std::size_t top(const RingElem& f) { return f.tower().levels(); }

void check_same(const RingElem& a, const RingElem& b) {
  if (!a.ctx() || !b.ctx()) fail(ErrorKind::Precondition, "ring element without context");
  if (a.ctx() != b.ctx() && !a.ctx()->same_as(*b.ctx()))
    fail(ErrorKind::Precondition, "ring elements from different rings");
}

// Dense coefficient grid over a rectangle of exponents; empty Coords means zero.
struct Grid {
  int i0 = 0, j0 = 0, w = 0, h = 0;
  std::vector<Coords> cells;

  Grid(int i0_, int j0_, int w_, int h_) : i0(i0_), j0(j0_), w(w_), h(h_), cells(std::size_t(w_) * h_) {}
  Coords& at(int i, int j) { return cells[std::size_t(j - j0) * w + (i - i0)]; }

  void accumulate(const Tower& t, std::size_t k, int i, int j, Coords c) {
    Coords& cell = at(i, j);
    if (cell.empty())
      cell = std::move(c);
    else
      cell = t.add(k, cell, c);
  }

  RingElem::Terms terms() const {
    RingElem::Terms out;
    for (int j = 0; j < h; ++j)
      for (int i = 0; i < w; ++i) {
        const Coords& c = cells[std::size_t(j) * w + i];
        if (!c.empty() && !Tower::is_zero(c)) out.emplace(Mono{i + i0, j + j0}, c);
      }
    return out;
  }
};

struct Box {
  int imin = INT_MAX, imax = INT_MIN, jmin = INT_MAX, jmax = INT_MIN;
};

Box box(const RingElem::Terms& t) {
  Box b;
  for (const auto& [m, c] : t) {
    b.imin = std::min(b.imin, m.i);
    b.imax = std::max(b.imax, m.i);
    b.jmin = std::min(b.jmin, m.j);
    b.jmax = std::max(b.jmax, m.j);
  }
  return b;
}

}  // namespace

RingElem::RingElem(CtxPtr ctx, Terms terms) : ctx_(std::move(ctx)) {
  for (auto& [m, c] : terms)
    if (!Tower::is_zero(c)) terms_.emplace(m, std::move(c));
}

RingElem RingElem::constant(const CtxPtr& ctx, const TowerElem& c) {
  TowerElem e = c.tower() == ctx->tower ? c : c.embed(ctx->tower);
  Terms t;
  if (!e.is_zero()) t.emplace(Mono{0, 0}, e.coords());
  return RingElem(ctx, std::move(t));
}

RingElem RingElem::constant(const CtxPtr& ctx, const Rational& c) {
  return constant(ctx, TowerElem::constant(ctx->tower, c));
}

RingElem RingElem::monomial(const CtxPtr& ctx, int i, int j, const Rational& c) {
  Terms t;
  Coords v = ctx->tower->constant(ctx->tower->levels(), c);
  if (!Tower::is_zero(v)) t.emplace(Mono{i, j}, std::move(v));
  return RingElem(ctx, std::move(t));
}

RingElem RingElem::parse(const CtxPtr& ctx, std::string_view text) {
  MPoly p = parse_mpoly(text, {ctx->names[0], ctx->names[1]}, ctx->tower);
  Terms t;
  for (auto& [e, c] : p) t.emplace(Mono{e[0], e[1]}, c);
  return RingElem(ctx, std::move(t));
}

bool RingElem::is_polynomial() const {
  for (const auto& [m, c] : terms_)
    if (m.i < 0 || m.j < 0) return false;
  return true;
}

TowerElem RingElem::coefficient(int i, int j) const {
  auto it = terms_.find(Mono{i, j});
  if (it == terms_.end()) return TowerElem::zero(ctx_->tower);
  return TowerElem(ctx_->tower, it->second);
}

int RingElem::deg_y() const { return terms_.empty() ? -1 : terms_.rbegin()->first.j; }

int RingElem::deg_x() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.i);
  return d;
}

RingElem RingElem::operator+(const RingElem& o) const {
  check_same(*this, o);
  Terms t = terms_;
  const auto k = top(*this);
  for (const auto& [m, c] : o.terms_) {
    auto it = t.find(m);
    if (it == t.end()) {
      t.emplace(m, c);
    } else {
      it->second = tower().add(k, it->second, c);
      if (Tower::is_zero(it->second)) t.erase(it);
    }
  }
  RingElem r(ctx_);
  r.terms_ = std::move(t);
  return r;
}

RingElem RingElem::operator-() const {
  RingElem r(ctx_);
  const auto k = top(*this);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, tower().neg(k, c));
  return r;
}

RingElem RingElem::operator-(const RingElem& o) const { return *this + (-o); }

RingElem RingElem::operator*(const RingElem& o) const {
  check_same(*this, o);
  if (is_zero() || o.is_zero()) return RingElem(ctx_);
  const Tower& t = tower();
  const auto k = top(*this);
  Box a = box(terms_), b = box(o.terms_);
  long w = long(a.imax) + b.imax - a.imin - b.imin + 1;
  long h = long(a.jmax) + b.jmax - a.jmin - b.jmin + 1;
  if (w * h <= (1L << 22)) {
    Grid g(a.imin + b.imin, a.jmin + b.jmin, int(w), int(h));
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : o.terms_) g.accumulate(t, k, ma.i + mb.i, ma.j + mb.j, t.mul(k, ca, cb));
    return RingElem(ctx_, g.terms());
  }
  Terms acc;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      Mono m{ma.i + mb.i, ma.j + mb.j};
      Coords p = t.mul(k, ca, cb);
      auto it = acc.find(m);
      if (it == acc.end())
        acc.emplace(m, std::move(p));
      else
        it->second = t.add(k, it->second, p);
    }
  return RingElem(ctx_, std::move(acc));
}

RingElem RingElem::scaled(const Coords& c) const {
  const auto k = top(*this);
  Terms t;
  for (const auto& [m, v] : terms_) t.emplace(m, tower().mul(k, v, c));
  return RingElem(ctx_, std::move(t));
}

RingElem RingElem::shifted(int di, int dj) const {
  RingElem r(ctx_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(Mono{m.i + di, m.j + dj}, c);
  return r;
}

RingElem RingElem::pow(unsigned e) const {
  RingElem result = constant(ctx_, Rational(1));
  RingElem base = *this;
  while (e) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e) base *= base;
  }
  return result;
}

RingElem RingElem::embed(const CtxPtr& bigger) const {
  if (bigger == ctx_) return *this;
  if (!tower().is_prefix_of(*bigger->tower))
    fail(ErrorKind::Precondition, "target ring does not extend the coefficient field");
  const auto k = top(*this), K = bigger->tower->levels();
  Terms t;
  for (const auto& [m, c] : terms_) t.emplace(m, bigger->tower->lift(k, K, c));
  return RingElem(bigger, std::move(t));
}

Mono RingElem::min_exponents() const {
  if (terms_.empty()) return {0, 0};
  Box b = box(terms_);
  return {b.imin, b.jmin};
}

std::string RingElem::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string coef = tower().format(c);
    bool neg = !coef.empty() && coef[0] == '-' && coef.find_first_of("+-", 1) == std::string::npos;
    if (neg) coef = coef.substr(1);
    bool compound = coef.find_first_of("+-", 1) != std::string::npos;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    std::string mono;
    auto var = [&](const std::string& n, int e) {
      if (e == 0) return;
      if (!mono.empty()) mono += "*";
      mono += n;
      if (e != 1) mono += "^" + std::to_string(e);
    };
    var(ctx_->names[0], m.i);
    var(ctx_->names[1], m.j);
    if (mono.empty()) {
      os << coef;
    } else if (coef == "1") {
      os << mono;
    } else {
      os << (compound ? "(" + coef + ")" : coef) << "*" << mono;
    }
  }
  return os.str();
}

std::pair<RingElem, RingElem> divmod_y(const RingElem& f, const RingElem& p) {
  check_same(f, p);
  const int D = p.deg_y();
  if (D < 1) fail(ErrorKind::Precondition, "divisor must have positive degree in the second parameter");
  for (const auto& [m, c] : p.terms())
    if (m.j == D && !(m.i == 0 && TowerElem(p.ctx()->tower, c).is_one()))
      fail(ErrorKind::Precondition, "divisor must be monic in the second parameter");
  if (!f.is_polynomial() || !p.is_polynomial()) fail(ErrorKind::Precondition, "divmod of a Laurent polynomial");
  const Tower& t = f.tower();
  const auto k = top(f);
  if (f.deg_y() < D) return {RingElem(f.ctx()), f};
  const int H = f.deg_y() + 1;
  const int steps = (f.deg_y() - D) / D + 1;
  const int W = std::max(0, f.deg_x()) + steps * std::max(0, p.deg_x()) + 1;
  Grid rem(0, 0, W, H);
  for (const auto& [m, c] : f.terms()) rem.at(m.i, m.j) = c;
  RingElem::Terms quot;
  std::vector<std::pair<Mono, Coords>> lower;
  for (const auto& [m, c] : p.terms())
    if (m.j < D) lower.emplace_back(m, c);
  for (int j = H - 1; j >= D; --j)
    for (int i = 0; i < W; ++i) {
      Coords c = std::move(rem.at(i, j));
      rem.at(i, j).clear();
      if (c.empty() || Tower::is_zero(c)) continue;
      for (const auto& [m, pc] : lower) rem.accumulate(t, k, i + m.i, j - D + m.j, t.neg(k, t.mul(k, c, pc)));
      quot.emplace(Mono{i, j - D}, std::move(c));
    }
  return {RingElem(f.ctx(), std::move(quot)), RingElem(f.ctx(), rem.terms())};
}

namespace {

RingElem substitute_impl(const RingElem& f, const std::array<RingElem, 2>& images) {
  const CtxPtr& tgt = images[0].ctx();
  check_same(images[0], images[1]);
  if (!f.tower().is_prefix_of(*tgt->tower))
    fail(ErrorKind::Precondition, "substitution target does not extend the coefficient field");
  if (f.is_zero()) return RingElem(tgt);
  const auto ks = top(f), kt = tgt->tower->levels();
  for (const auto& [m, c] : f.terms())
    if (m.i < 0 || m.j < 0) fail(ErrorKind::Precondition, "substitution into a Laurent polynomial");
  // Horner in y over x-polynomials.
  std::vector<RingElem> xp{RingElem::constant(tgt, Rational(1))};
  const int dx = f.deg_x();
  for (int i = 1; i <= dx; ++i) xp.push_back(xp.back() * images[0]);
  RingElem acc(tgt);
  auto it = f.terms().rbegin();
  for (int j = f.deg_y(); j >= 0; --j) {
    acc = acc * images[1];
    RingElem row(tgt);
    for (; it != f.terms().rend() && it->first.j == j; ++it)
      row += xp[std::size_t(it->first.i)].scaled(tgt->tower->lift(ks, kt, it->second));
    acc += row;
  }
  return acc;
}

}  // namespace

RingElem substitute(const RingElem& f, const std::array<RingElem, 2>& images) {
  RingElem r = substitute_impl(f, images);
  if (!r.is_polynomial()) fail(ErrorKind::NotRegular, "substitution leaves a negative exponent");
  return r;
}

RingElem substitute_laurent(const RingElem& f, const std::array<RingElem, 2>& images) {
  return substitute_impl(f, images);
}

std::optional<int> order_mod_x(const RingElem& f) {
  std::optional<int> best;
  for (const auto& [m, c] : f.terms())
    if (m.i == 0 && (!best || m.j < *best)) best = m.j;
  return best;
}

ExtensionMap::ExtensionMap(CtxPtr src, std::array<RingElem, 2> imgs, int degree, Integer p, std::optional<bool> uniq)
    : source(std::move(src)), target(imgs[0].ctx()), images(std::move(imgs)), field_degree(degree),
      residue_char(std::move(p)), unique(uniq) {
  check_same(images[0], images[1]);
  if (!source->tower->is_prefix_of(*target->tower))
    fail(ErrorKind::Precondition, "extension target does not contain the source coefficients");
  for (const auto& im : images)
    if (!im.is_polynomial() || !im.constant_term().is_zero())
      fail(ErrorKind::Precondition, "parameter images must lie in the maximal ideal");
}

RingElem ExtensionMap::operator()(const RingElem& f) const {
  if (!f.ctx()->same_as(*source)) fail(ErrorKind::Precondition, "element is not in the source ring");
  return substitute(f, images);
}

std::optional<MonomialForm> monomialize_check(const ExtensionMap& ext) {
  const RingElem& u = ext.images[0];
  const RingElem& v = ext.images[1];
  if (u.is_zero() || v.is_zero()) return std::nullopt;
  MonomialForm m;
  m.a = u.min_exponents().i;
  m.gamma = u.shifted(-m.a, 0);
  if (m.a < 1 || !m.gamma.is_unit()) return std::nullopt;
  m.b = v.min_exponents().i;
  m.f = v.shifted(-m.b, 0);
  if (m.f.is_unit()) return std::nullopt;
  m.d = *order_mod_x(m.f);
  return m;
}

}  // namespace valtool
