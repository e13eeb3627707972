#include "valtool/tower.hpp"

#include <algorithm>
#include <sstream>

namespace valtool {

TowerPtr Tower::base(const Integer& p) {
  if (p < 0) fail(ErrorKind::Precondition, "negative characteristic");
  if (p > 1) {
    for (Integer d = 2; d * d <= p; ++d)
      if (p % d == 0) fail(ErrorKind::Precondition, "characteristic " + str(p) + " is not prime");
  }
  auto t = std::make_shared<Tower>();
  t->field_.p = p == 1 ? Integer(0) : p;
  return t;
}

Coords Tower::constant(std::size_t k, const Rational& c) const {
  Coords r = zero(k);
  r[0] = field_.norm(c);
  return r;
}

Coords Tower::add(std::size_t k, const Coords& a, const Coords& b) const {
  Coords r(dim(k));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_.add(a[i], b[i]);
  return r;
}

Coords Tower::sub(std::size_t k, const Coords& a, const Coords& b) const {
  Coords r(dim(k));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_.sub(a[i], b[i]);
  return r;
}

Coords Tower::neg(std::size_t k, const Coords& a) const {
  Coords r(dim(k));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_.neg(a[i]);
  return r;
}

bool Tower::is_zero(const Coords& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& x) { return x == 0; });
}

Coords Tower::chunk(std::size_t k, const Coords& a, std::size_t i) const {
  std::size_t s = dim(k - 1);
  return Coords(a.begin() + static_cast<std::ptrdiff_t>(i * s), a.begin() + static_cast<std::ptrdiff_t>((i + 1) * s));
}

Coords Tower::mul(std::size_t k, const Coords& a, const Coords& b) const {
  if (k == 0) return {field_.mul(a[0], b[0])};
  std::size_t m = degree(k - 1), s = dim(k - 1);
  UPoly pa(m), pb(m);
  for (std::size_t i = 0; i < m; ++i) {
    pa[i] = chunk(k, a, i);
    pb[i] = chunk(k, b, i);
  }
  UPoly c = poly_mul(k - 1, pa, pb);
  const UPoly& mp = levels_[k - 1].minpoly;
  for (std::size_t i = c.size(); i-- > m;) {
    if (is_zero(c[i])) continue;
    for (std::size_t j = 0; j < m; ++j)
      c[i - m + j] = this->sub(k - 1, c[i - m + j], mul(k - 1, c[i], mp[j]));
    c[i] = zero(k - 1);
  }
  Coords r;
  r.reserve(m * s);
  for (std::size_t i = 0; i < m; ++i) {
    if (i < c.size()) r.insert(r.end(), c[i].begin(), c[i].end());
    else r.insert(r.end(), s, Rational(0));
  }
  return r;
}

void Tower::trim(UPoly& f) const {
  while (!f.empty() && is_zero(f.back())) f.pop_back();
}

UPoly Tower::poly_mul(std::size_t k, const UPoly& a, const UPoly& b) const {
  if (a.empty() || b.empty()) return {};
  UPoly c(a.size() + b.size() - 1, zero(k));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (is_zero(b[j])) continue;
      c[i + j] = add(k, c[i + j], mul(k, a[i], b[j]));
    }
  }
  return c;
}

UPoly Tower::poly_sub(std::size_t k, const UPoly& a, const UPoly& b) const {
  UPoly c(std::max(a.size(), b.size()), zero(k));
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = sub(k, c[i], b[i]);
  trim(c);
  return c;
}

std::pair<UPoly, UPoly> Tower::poly_divmod(std::size_t k, const UPoly& a, const UPoly& b) const {
  UPoly r = a, d = b;
  trim(r);
  trim(d);
  if (d.empty()) fail(ErrorKind::Precondition, "polynomial division by zero");
  if (r.size() < d.size()) return {{}, r};
  UPoly q(r.size() - d.size() + 1, zero(k));
  Coords lead_inv = inv(k, d.back());
  for (std::size_t i = r.size(); i-- >= d.size();) {
    if (is_zero(r[i])) continue;
    Coords c = mul(k, r[i], lead_inv);
    std::size_t sh = i - (d.size() - 1);
    q[sh] = c;
    for (std::size_t j = 0; j < d.size(); ++j) r[sh + j] = sub(k, r[sh + j], mul(k, c, d[j]));
  }
  trim(q);
  trim(r);
  return {q, r};
}

Coords Tower::poly_eval(std::size_t k, const UPoly& f, const Coords& x) const {
  Coords r = zero(k);
  for (std::size_t i = f.size(); i-- > 0;) r = add(k, mul(k, r, x), f[i]);
  return r;
}

Coords Tower::inv(std::size_t k, const Coords& a) const {
  if (is_zero(a)) fail(ErrorKind::Precondition, "inverse of zero in " + format(a));
  if (k == 0) return {field_.inv(a[0])};
  std::size_t m = degree(k - 1), s = dim(k - 1);
  UPoly r0 = levels_[k - 1].minpoly, r1(m);
  for (std::size_t i = 0; i < m; ++i) r1[i] = chunk(k, a, i);
  trim(r1);
  UPoly s0, s1{constant(k - 1, 1)};
  while (r1.size() > 1) {
    auto [q, r] = poly_divmod(k - 1, r0, r1);
    UPoly s2 = poly_sub(k - 1, s0, poly_mul(k - 1, q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r1.empty())
    fail(ErrorKind::NotField, "level '" + levels_[k - 1].name + "' minimal polynomial is reducible");
  Coords c = inv(k - 1, r1[0]);
  Coords out;
  out.reserve(m * s);
  for (std::size_t i = 0; i < m; ++i) {
    Coords v = i < s1.size() ? mul(k - 1, s1[i], c) : zero(k - 1);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

Coords Tower::pow(std::size_t k, Coords a, long e) const {
  if (e < 0) {
    a = inv(k, a);
    e = -e;
  }
  Coords r = constant(k, 1);
  while (e > 0) {
    if (e & 1) r = mul(k, r, a);
    e >>= 1;
    if (e > 0) a = mul(k, a, a);
  }
  return r;
}

Coords Tower::generator(std::size_t k, std::size_t j) const {
  if (j >= k) fail(ErrorKind::Precondition, "generator index out of range");
  Coords r = zero(k);
  r[dim(j)] = 1;
  return r;
}

Coords Tower::lift(std::size_t, std::size_t k, const Coords& a) const {
  Coords r = zero(k);
  std::copy(a.begin(), a.end(), r.begin());
  return r;
}

std::optional<Coords> Tower::drop(std::size_t k, std::size_t j, const Coords& a) const {
  (void)k;
  for (std::size_t i = dim(j); i < a.size(); ++i)
    if (a[i] != 0) return std::nullopt;
  return Coords(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(dim(j)));
}

TowerPtr Tower::prefix(std::size_t k) const {
  auto t = std::make_shared<Tower>();
  t->field_ = field_;
  t->levels_.assign(levels_.begin(), levels_.begin() + static_cast<std::ptrdiff_t>(k));
  t->dims_.assign(dims_.begin(), dims_.begin() + static_cast<std::ptrdiff_t>(k + 1));
  return t;
}

bool Tower::is_prefix_of(const Tower& other) const {
  if (this == &other) return true;
  if (field_.p != other.field_.p || levels_.size() > other.levels_.size()) return false;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (levels_[k].name != other.levels_[k].name || levels_[k].minpoly != other.levels_[k].minpoly) return false;
  }
  return true;
}

std::string Tower::format(const Coords& a) const {
  std::vector<std::string> terms;
  for (std::size_t idx = a.size(); idx-- > 0;) {
    if (a[idx] == 0) continue;
    std::string mono;
    std::size_t rest = idx;
    for (std::size_t k = levels_.size(); k-- > 0;) {
      std::size_t e = rest / dims_[k];
      rest %= dims_[k];
      if (e == 0) continue;
      if (!mono.empty()) mono = "*" + mono;
      mono = levels_[k].name + (e > 1 ? "^" + std::to_string(e) : "") + mono;
    }
    Rational c = a[idx];
    bool negative = c < 0;
    if (negative) c = -c;
    std::string t;
    if (mono.empty()) t = c.str();
    else if (c == 1) t = mono;
    else t = c.str() + "*" + mono;
    terms.push_back((negative ? "-" : "+") + t);
  }
  if (terms.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string& t = terms[i];
    if (i == 0) s += t[0] == '-' ? "-" + t.substr(1) : t.substr(1);
    else s += std::string(" ") + t[0] + " " + t.substr(1);
  }
  return s;
}

std::string Tower::format_poly(std::size_t k, const UPoly& f, const std::string& var) const {
  std::string s;
  auto sub = prefix(k);
  for (std::size_t i = f.size(); i-- > 0;) {
    if (is_zero(f[i])) continue;
    std::string c = sub->format(f[i]);
    std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
    std::string term;
    bool simple = c.find_first_of(" ") == std::string::npos;
    if (mono.empty()) term = c;
    else if (c == "1") term = mono;
    else if (c == "-1") term = "-" + mono;
    else term = (simple ? c : "(" + c + ")") + "*" + mono;
    if (s.empty()) s = term;
    else if (term[0] == '-') s += " - " + term.substr(1);
    else s += " + " + term;
  }
  return s.empty() ? "0" : s;
}

std::optional<std::vector<Coords>> Tower::enumerate(std::size_t k, std::size_t cap) const {
  if (field_.p == 0) return std::nullopt;
  Integer total = 1;
  for (std::size_t i = 0; i < dim(k); ++i) {
    total *= field_.p;
    if (total > cap) return std::nullopt;
  }
  std::size_t n = static_cast<std::size_t>(total.convert_to<unsigned long long>());
  unsigned long long p = field_.p.convert_to<unsigned long long>();
  std::vector<Coords> out;
  out.reserve(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    Coords c(dim(k));
    std::size_t r = idx;
    for (std::size_t i = 0; i < dim(k); ++i) {
      c[i] = Rational(static_cast<unsigned long long>(r % p));
      r /= p;
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

constexpr std::size_t kEnumCap = 1u << 16;

std::vector<Integer> divisors(Integer n) {
  if (n < 0) n = -n;
  std::vector<Integer> small, large;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

// Monic integer polynomial z -> L^m f(z/L) for monic rational f.
std::vector<Integer> integral_monic(const UPoly& f) {
  std::size_t m = f.size() - 1;
  Integer l = 1;
  for (const auto& c : f) l = lcm(l, denom(c[0]));
  std::vector<Integer> g(m + 1);
  Integer pw = 1;
  for (std::size_t i = m + 1; i-- > 0;) {
    g[i] = numer(f[i][0] * Rational(pw));
    pw *= l;
  }
  return g;
}

Integer eval_int(const std::vector<Integer>& g, const Integer& z) {
  Integer r = 0;
  for (std::size_t i = g.size(); i-- > 0;) r = r * z + g[i];
  return r;
}

const Integer kDivisorCap("1000000000000");

// Reducibility witness over Q for a monic polynomial of degree <= 4, or "" when none.
std::optional<std::string> rational_witness(const UPoly& f, bool& assumed) {
  std::size_t m = f.size() - 1;
  auto g = integral_monic(f);
  Integer l = 1;
  for (const auto& c : f) l = lcm(l, denom(c[0]));
  if (g[0] == 0) return std::string("root 0");
  Integer a0 = g[0] < 0 ? Integer(-g[0]) : g[0];
  if (a0 > kDivisorCap) {
    assumed = true;
    return std::nullopt;
  }
  auto ds = divisors(a0);
  for (const auto& d : ds) {
    for (int sgn : {1, -1}) {
      Integer z = d * sgn;
      if (eval_int(g, z) == 0) return "root " + Rational(z, l).str();
    }
  }
  if (m == 4) {
    // z^4 + g3 z^3 + g2 z^2 + g1 z + g0 = (z^2 + a z + b)(z^2 + c z + e)
    for (const auto& d : ds) {
      for (int sgn : {1, -1}) {
        Integer b = d * sgn, e = g[0] / b;
        auto check = [&](const Integer& a) {
          Integer c = g[3] - a;
          return b + e + a * c == g[2] && a * e + b * c == g[1];
        };
        if (e != b) {
          Integer num = g[1] - b * g[3], den = e - b;
          if (num % den == 0 && check(num / den)) return std::string("quadratic factor");
        } else if (g[1] == b * g[3]) {
          // a + c = g3, a c = g2 - 2b
          Integer disc = g[3] * g[3] - 4 * (g[2] - 2 * b);
          if (disc >= 0) {
            Integer s = bmp::sqrt(disc);
            if (s * s == disc && (g[3] + s) % 2 == 0) return std::string("quadratic factor");
          }
        }
      }
    }
  } else if (m > 4) {
    assumed = true;
  }
  return std::nullopt;
}

}  // namespace

TowerPtr tower_extend(const TowerPtr& t, const std::string& name, const UPoly& minpoly_in) {
  std::size_t k = t->levels();
  UPoly mp = minpoly_in;
  for (auto& c : mp) {
    if (c.size() != t->dim(k)) fail(ErrorKind::Precondition, "minimal polynomial coefficient of wrong size");
    for (auto& x : c) x = t->field().norm(x);
  }
  t->trim(mp);
  if (mp.size() < 2) fail(ErrorKind::NotField, "minimal polynomial for '" + name + "' is constant");
  if (mp.back() != t->constant(k, 1)) fail(ErrorKind::Precondition, "minimal polynomial for '" + name + "' is not monic");
  std::size_t m = mp.size() - 1;
  if (m == 1)
    fail(ErrorKind::NotField, "degree-1 adjoin of '" + name + "' is disallowed: root " +
                                  t->format(t->neg(k, mp[0])) + " already lies in the field");
  for (const auto& l : t->levels_)
    if (l.name == name) fail(ErrorKind::Precondition, "duplicate tower level '" + name + "'");

  bool assumed = false;
  if (auto elems = t->enumerate(k, kEnumCap)) {
    for (const auto& x : *elems)
      if (Tower::is_zero(t->poly_eval(k, mp, x)))
        fail(ErrorKind::NotField, "'" + name + "' minimal polynomial has root " + t->format(x));
    if (m == 4 && elems->size() * elems->size() <= kEnumCap * 16) {
      for (const auto& b : *elems)
        for (const auto& c : *elems) {
          UPoly q{c, b, t->constant(k, 1)};
          if (t->poly_divmod(k, mp, q).second.empty())
            fail(ErrorKind::NotField, "'" + name + "' minimal polynomial has a quadratic factor");
        }
    } else if (m >= 4) {
      assumed = true;
    }
  } else if (t->characteristic() == 0 && k == 0) {
    if (auto w = rational_witness(mp, assumed))
      fail(ErrorKind::NotField, "'" + name + "' minimal polynomial is reducible: " + *w);
  } else {
    assumed = true;
  }

  auto out = std::make_shared<Tower>(*t);
  out->levels_.push_back({name, mp, assumed});
  out->dims_.push_back(t->dim(k) * m);
  return out;
}

TowerElem::TowerElem(TowerPtr t, Coords c) : t_(std::move(t)), c_(std::move(c)) {
  if (c_.size() != t_->dim()) fail(ErrorKind::Precondition, "tower element of wrong size");
}

bool TowerElem::is_one() const { return c_ == t_->constant(t_->levels(), 1); }

namespace {

const TowerPtr& pick(const TowerElem& a, const TowerElem& b) {
  if (a.tower() == b.tower()) return a.tower();
  if (a.tower()->same_as(*b.tower())) return a.tower();
  fail(ErrorKind::Precondition, "tower elements from different towers");
}

}  // namespace

TowerElem TowerElem::operator+(const TowerElem& o) const {
  const auto& t = pick(*this, o);
  return {t, t->add(t->levels(), c_, o.c_)};
}

TowerElem TowerElem::operator-(const TowerElem& o) const {
  const auto& t = pick(*this, o);
  return {t, t->sub(t->levels(), c_, o.c_)};
}

TowerElem TowerElem::operator-() const { return {t_, t_->neg(t_->levels(), c_)}; }

TowerElem TowerElem::operator*(const TowerElem& o) const {
  const auto& t = pick(*this, o);
  return {t, t->mul(t->levels(), c_, o.c_)};
}

TowerElem TowerElem::inverse() const { return {t_, t_->inv(t_->levels(), c_)}; }

TowerElem TowerElem::pow(long e) const { return {t_, t_->pow(t_->levels(), c_, e)}; }

bool TowerElem::operator==(const TowerElem& o) const {
  pick(*this, o);
  return c_ == o.c_;
}

TowerElem TowerElem::embed(const TowerPtr& bigger) const {
  if (!t_->is_prefix_of(*bigger)) fail(ErrorKind::Precondition, "embedding into a tower that does not extend this one");
  return {bigger, bigger->lift(t_->levels(), bigger->levels(), c_)};
}

namespace {

Vec<Rational> as_vec(const Coords& c) {
  Vec<Rational> v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = c[i];
  return v;
}

}  // namespace

std::size_t subfield_dim(const Subfield& f) {
  const Tower& t = *f.tower;
  std::size_t top = t.levels();
  std::vector<Coords> gens;
  for (std::size_t j = 0; j < f.levels; ++j) gens.push_back(t.generator(top, j));
  for (const auto& e : f.extra) gens.push_back(e);
  Echelon<BaseField> span(t.field(), static_cast<Eigen::Index>(t.dim()));
  std::vector<Coords> basis{t.constant(top, 1)};
  span.insert(as_vec(basis[0]));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (const auto& g : gens) {
      Coords v = t.mul(top, basis[i], g);
      if (span.insert(as_vec(v))) basis.push_back(std::move(v));
    }
  }
  return basis.size();
}

std::size_t degree_over(const TowerElem& e, const Subfield& sub) {
  if (!sub.tower->same_as(*e.tower())) fail(ErrorKind::Precondition, "subfield of a different tower");
  Subfield with = sub;
  with.extra.push_back(e.coords());
  std::size_t big = subfield_dim(with), small = subfield_dim(sub);
  if (big % small != 0) fail(ErrorKind::Internal, "subfield dimensions do not divide");
  return big / small;
}

UPoly minimal_polynomial(const TowerElem& e, std::size_t k) {
  const Tower& t = *e.tower();
  std::size_t top = t.levels(), dk = t.dim(k), n = t.dim();
  std::vector<Coords> powers{t.constant(top, 1)};
  for (std::size_t m = 1; m <= n / dk; ++m) {
    powers.push_back(t.mul(top, powers.back(), e.coords()));
    // columns: basis element b of K_k times e^i for i < m
    Mat<Rational> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m * dk));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t b = 0; b < dk; ++b) {
        Coords basis = t.zero(top);
        basis[b] = 1;
        a.col(static_cast<Eigen::Index>(i * dk + b)) = as_vec(t.mul(top, basis, powers[i]));
      }
    Vec<Rational> rhs = as_vec(t.neg(top, powers[m]));
    if (auto x = solve(t.field(), a, rhs)) {
      UPoly f(m + 1);
      for (std::size_t i = 0; i < m; ++i) {
        f[i] = Coords(dk);
        for (std::size_t b = 0; b < dk; ++b) f[i][b] = (*x)(static_cast<Eigen::Index>(i * dk + b));
      }
      f[m] = t.constant(k, 1);
      return f;
    }
  }
  fail(ErrorKind::Internal, "no minimal polynomial found");
}

}  // namespace valtool
