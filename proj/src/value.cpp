#include "valtool/value.hpp"

#include "valtool/linalg.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace valtool {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Undecided: return "undecided comparison";
    case ErrorKind::Containment: return "containment";
    case ErrorKind::NotField: return "not a field extension";
    case ErrorKind::InsufficientData: return "insufficient generating-sequence data";
    case ErrorKind::InsufficientKeys: return "insufficient keys";
    case ErrorKind::Inconsistent: return "inconsistent data";
    case ErrorKind::NotRegular: return "not regular after substitution";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Internal: return "internal";
  }
  return "?";
}

Integer gcd(Integer a, Integer b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  Integer l = a / gcd(a, b) * b;
  return l < 0 ? Integer(-l) : l;
}

Integer mod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

Bezout ext_gcd(const Integer& a, const Integer& b) {
  Integer r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Integer q = r0 / r1;
    Integer r2 = r0 - q * r1;
    Integer s2 = s0 - q * s1;
    Integer t2 = t0 - q * t1;
    r0 = std::move(r1); r1 = std::move(r2);
    s0 = std::move(s1); s1 = std::move(s2);
    t0 = std::move(t1); t1 = std::move(t2);
  }
  if (r0 < 0) { r0 = -r0; s0 = -s0; t0 = -t0; }
  return {r0, s0, t0};
}

Integer inverse_mod(const Integer& a, const Integer& m) {
  auto e = ext_gcd(mod(a, m), m);
  if (e.g != 1) fail(ErrorKind::Precondition, "no inverse of " + str(a) + " modulo " + str(m));
  return mod(e.s, m);
}

Rational parse_rational(std::string_view s) {
  auto bad = [&] { fail(ErrorKind::Parse, "not a rational: '" + std::string(s) + "'"); };
  if (s.empty()) bad();
  auto slash = s.find('/');
  auto digits = [&](std::string_view t, bool sign_ok) {
    std::size_t i = 0;
    if (sign_ok && i < t.size() && (t[i] == '-' || t[i] == '+')) ++i;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  std::string_view n = s.substr(0, slash);
  std::string_view d = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!digits(n, true) || !digits(d, false)) bad();
  std::string ns(n);
  if (ns[0] == '+') ns.erase(0, 1);
  Integer num(ns), den{std::string(d)};
  if (den == 0) fail(ErrorKind::Parse, "zero denominator in '" + std::string(s) + "'");
  return Rational(num, den);
}

std::string str(const Rational& q) { return q.str(); }
std::string str(const Integer& z) { return z.str(); }

Irrational::Irrational(std::string name, std::vector<std::pair<Rational, Rational>> intervals)
    : name_(std::move(name)), intervals_(std::move(intervals)) {
  if (intervals_.empty()) fail(ErrorKind::Precondition, "irrational '" + name_ + "' has no intervals");
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    const auto& [lo, hi] = intervals_[k];
    if (!(lo < hi)) fail(ErrorKind::Precondition, "irrational '" + name_ + "': empty interval");
    if (k > 0) {
      const auto& [plo, phi] = intervals_[k - 1];
      if (lo < plo || hi > phi || (hi - lo) >= (phi - plo))
        fail(ErrorKind::Precondition, "irrational '" + name_ + "': intervals not strictly nested");
    }
  }
}

std::shared_ptr<const Irrational> Irrational::pi() {
  static const std::shared_ptr<const Irrational> p = [] {
    const std::string digits = "31415926535897932384626433832795028841971";
    std::vector<std::pair<Rational, Rational>> iv;
    Integer scale = 1;
    for (std::size_t k = 1; k <= digits.size(); ++k) {
      Integer lo(digits.substr(0, k));
      iv.emplace_back(Rational(lo, scale), Rational(lo + 1, scale));
      scale *= 10;
    }
    return std::make_shared<const Irrational>("pi", std::move(iv));
  }();
  return p;
}

namespace {

IrrationalPtr join_tau(const IrrationalPtr& a, const IrrationalPtr& b) {
  if (!a) return b;
  if (!b) return a;
  if (a != b && a->name() != b->name())
    fail(ErrorKind::Precondition, "values over different irrationals " + a->name() + ", " + b->name());
  return a;
}

}  // namespace

Value& Value::operator+=(const Value& o) {
  tau = join_tau(tau, o.tau);
  q0 += o.q0;
  q1 += o.q1;
  return *this;
}

Value& Value::operator-=(const Value& o) {
  tau = join_tau(tau, o.tau);
  q0 -= o.q0;
  q1 -= o.q1;
  return *this;
}

Value Value::operator-() const { return Value(-q0, -q1, tau); }

Value operator*(const Rational& k, const Value& v) { return Value(k * v.q0, k * v.q1, v.tau); }

Cmp value_cmp(const Value& a, const Value& b, std::size_t max_refinements) {
  Rational d0 = a.q0 - b.q0, d1 = a.q1 - b.q1;
  if (d1 == 0) return d0 < 0 ? Cmp::LT : (d0 > 0 ? Cmp::GT : Cmp::EQ);
  IrrationalPtr t = join_tau(a.tau, b.tau);
  if (!t) fail(ErrorKind::Precondition, "value with irrational part but no descriptor");
  const auto& iv = t->intervals();
  std::size_t cap = max_refinements == 0 ? iv.size() : std::min(max_refinements, iv.size());
  for (std::size_t k = 0; k < cap; ++k) {
    Rational x = d0 + d1 * iv[k].first, y = d0 + d1 * iv[k].second;
    if (x > 0 && y > 0) return Cmp::GT;
    if (x < 0 && y < 0) return Cmp::LT;
  }
  fail(ErrorKind::Undecided, "cannot decide sign of " + str(Value(d0, d1, t)) + " within " +
                                 std::to_string(cap) + " refinements");
}

IrrationalPtr common_tau(const std::vector<Value>& vs) {
  IrrationalPtr t;
  for (const auto& v : vs) t = join_tau(t, v.tau);
  return t;
}

std::string str(const Value& v) {
  if (v.q1 == 0) return v.q0.str();
  std::string name = v.tau ? v.tau->name() : "tau";
  std::string t = v.q1 == 1 ? name : (v.q1 == -1 ? "-" + name : v.q1.str() + "*" + name);
  if (v.q0 == 0) return t;
  if (v.q1 < 0) return v.q0.str() + " - " + t.substr(1);
  return v.q0.str() + " + " + t;
}

Mat<Integer> hermite_rows(Mat<Integer> m) {
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    for (Eigen::Index r = row + 1; r < m.rows(); ++r) {
      if (m(r, col) == 0) continue;
      auto e = ext_gcd(m(row, col), m(r, col));
      Integer a = m(row, col) / e.g, b = m(r, col) / e.g;
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        Integer top = e.s * m(row, c) + e.t * m(r, c);
        Integer bot = -b * m(row, c) + a * m(r, c);
        m(row, c) = std::move(top);
        m(r, c) = std::move(bot);
      }
    }
    if (m(row, col) == 0) continue;
    if (m(row, col) < 0) m.row(row) = (-m.row(row)).eval();
    for (Eigen::Index r = 0; r < row; ++r) {
      Integer q = m(r, col) / m(row, col);
      if (mod(m(r, col), m(row, col)) != m(r, col) - q * m(row, col)) q -= 1;
      if (q != 0)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) -= q * m(row, c);
    }
    ++row;
  }
  return m.topRows(row);
}

namespace {

// Integer coordinate rows of the values, scaled by the lcm of all denominators.
Mat<Integer> scaled(const std::vector<Value>& vs, const Integer& l) {
  Mat<Integer> m(static_cast<Eigen::Index>(vs.size()), 2);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    auto r = static_cast<Eigen::Index>(i);
    m(r, 0) = numer(vs[i].q0 * l);
    m(r, 1) = numer(vs[i].q1 * l);
  }
  return m;
}

Integer denominators_lcm(const std::vector<Value>& a, const std::vector<Value>& b) {
  Integer l = 1;
  for (const auto* vs : {&a, &b})
    for (const auto& v : *vs) l = lcm(lcm(l, denom(v.q0)), denom(v.q1));
  return l;
}

// Integer coefficients of v in the echelon basis h, if v lies in the lattice.
std::optional<std::vector<Integer>> hermite_solve(const Mat<Integer>& h, Vec<Integer> v) {
  std::vector<Integer> coeff(static_cast<std::size_t>(h.rows()));
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    Eigen::Index c = 0;
    while (h(r, c) == 0) ++c;
    if (v(c) % h(r, c) != 0) return std::nullopt;
    Integer q = v(c) / h(r, c);
    v -= q * h.row(r).transpose();
    coeff[static_cast<std::size_t>(r)] = q;
  }
  for (Eigen::Index c = 0; c < v.size(); ++c)
    if (v(c) != 0) return std::nullopt;
  return coeff;
}

}  // namespace

std::optional<Integer> group_index(const std::vector<Value>& big, const std::vector<Value>& small) {
  common_tau(big);
  common_tau(small);
  Integer l = denominators_lcm(big, small);
  Mat<Integer> hb = hermite_rows(scaled(big, l));
  Mat<Integer> hs = hermite_rows(scaled(small, l));
  for (const auto& v : small) {
    Vec<Integer> row(2);
    row << numer(v.q0 * l), numer(v.q1 * l);
    if (!hermite_solve(hb, row))
      fail(ErrorKind::Containment, "value " + str(v) + " is not in the group generated by the larger list");
  }
  if (hs.rows() < hb.rows()) return std::nullopt;
  Mat<Rational> c(hs.rows(), hb.rows());
  for (Eigen::Index r = 0; r < hs.rows(); ++r) {
    auto co = *hermite_solve(hb, hs.row(r).transpose());
    for (Eigen::Index k = 0; k < hb.rows(); ++k) c(r, k) = Rational(co[static_cast<std::size_t>(k)]);
  }
  BaseField q;
  Rational det = 1;
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    Eigen::Index p = k;
    while (c(p, k) == 0) ++p;
    if (p != k) { c.row(p).swap(c.row(k)); det = -det; }
    det *= c(k, k);
    for (Eigen::Index r = k + 1; r < c.rows(); ++r) {
      Rational f = c(r, k) / c(k, k);
      for (Eigen::Index j = k; j < c.cols(); ++j) c(r, j) = q.sub(c(r, j), f * c(k, j));
    }
  }
  Integer n = numer(det);
  return n < 0 ? Integer(-n) : n;
}

int rational_rank(const std::vector<Value>& vs) {
  if (vs.empty()) return 0;
  return static_cast<int>(hermite_rows(scaled(vs, denominators_lcm(vs, {}))).rows());
}

std::optional<std::vector<Integer>> lattice_coords(const std::vector<Value>& gens, const Value& target) {
  Mat<Rational> a(2, static_cast<Eigen::Index>(gens.size()));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    a(0, static_cast<Eigen::Index>(i)) = gens[i].q0;
    a(1, static_cast<Eigen::Index>(i)) = gens[i].q1;
  }
  Vec<Rational> b(2);
  b << target.q0, target.q1;
  auto x = solve(BaseField{}, a, b);
  if (!x) return std::nullopt;
  std::vector<Integer> out;
  for (Eigen::Index i = 0; i < x->size(); ++i) {
    if (!is_integer((*x)(i))) return std::nullopt;
    out.push_back(numer((*x)(i)));
  }
  return out;
}

bool in_group(const Value& v, const std::vector<Value>& gens) {
  if (v == Value()) return true;
  std::vector<Value> big = gens;
  big.push_back(v);
  auto idx = group_index(big, gens);
  return idx && *idx == 1;
}

// q with a = q*b, if any.
std::optional<Rational> value_ratio(const Value& a, const Value& b) {
  if (b.q1 == 0) {
    if (a.q1 != 0 || b.q0 == 0) return std::nullopt;
    return a.q0 / b.q0;
  }
  Rational q = a.q1 / b.q1;
  if (a.q0 != q * b.q0) return std::nullopt;
  return q;
}

// Largest a >= 0 with a*b <= g, capped at cap.
long floor_div(const Value& g, const Value& b, long cap) {
  if (g.q1 == 0 && b.q1 == 0) {
    Rational q = g.q0 / b.q0;
    Integer f = numer(q) / denom(q);
    if (q < 0) return -1;
    return f > cap ? cap : f.convert_to<long>();
  }
  long a = 0;
  while (a < cap && Rational(a + 1) * b <= g) ++a;
  return a;
}

}  // namespace valtool
