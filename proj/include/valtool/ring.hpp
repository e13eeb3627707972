#pragma once

#include "valtool/tower.hpp"
#include "valtool/value.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace valtool {

// A two-dimensional regular local ring modelled as tower[x, y] localized at (x, y).
struct LocalRingCtx {
  TowerPtr tower;
  std::array<std::string, 2> names{"x", "y"};
  // Transform records leading from the root ring, oldest first.
  std::vector<std::string> provenance;

  LocalRingCtx(TowerPtr t, std::array<std::string, 2> n, std::vector<std::string> prov = {});
  bool same_as(const LocalRingCtx& o) const { return names == o.names && tower->same_as(*o.tower); }
};

using CtxPtr = std::shared_ptr<const LocalRingCtx>;

CtxPtr make_ctx(TowerPtr t, std::array<std::string, 2> names = {"x", "y"}, std::vector<std::string> prov = {});

// x^i y^j, ordered by y-degree first.
struct Mono {
  int i = 0, j = 0;
  friend bool operator<(const Mono& a, const Mono& b) { return a.j != b.j ? a.j < b.j : a.i < b.i; }
  friend bool operator==(const Mono& a, const Mono& b) { return a.i == b.i && a.j == b.j; }
};

// Polynomial in the two parameters with coefficients in the context's tower.
// Exponents are non-negative except for results of Laurent substitution.
class RingElem {
 public:
  using Terms = std::map<Mono, Coords>;

  RingElem() = default;
  explicit RingElem(CtxPtr ctx) : ctx_(std::move(ctx)) {}
  RingElem(CtxPtr ctx, Terms terms);

  static RingElem constant(const CtxPtr& ctx, const TowerElem& c);
  static RingElem constant(const CtxPtr& ctx, const Rational& c);
  static RingElem monomial(const CtxPtr& ctx, int i, int j, const Rational& c = 1);
  static RingElem x(const CtxPtr& ctx) { return monomial(ctx, 1, 0); }
  static RingElem y(const CtxPtr& ctx) { return monomial(ctx, 0, 1); }
  static RingElem parse(const CtxPtr& ctx, std::string_view text);

  const CtxPtr& ctx() const { return ctx_; }
  const Tower& tower() const { return *ctx_->tower; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_polynomial() const;
  TowerElem coefficient(int i, int j) const;
  TowerElem constant_term() const { return coefficient(0, 0); }
  bool is_unit() const { return !constant_term().is_zero(); }
  int deg_y() const;  // -1 for zero
  int deg_x() const;
  std::size_t size() const { return terms_.size(); }

  RingElem operator+(const RingElem& o) const;
  RingElem operator-(const RingElem& o) const;
  RingElem operator-() const;
  RingElem operator*(const RingElem& o) const;
  RingElem& operator+=(const RingElem& o) { return *this = *this + o; }
  RingElem& operator-=(const RingElem& o) { return *this = *this - o; }
  RingElem& operator*=(const RingElem& o) { return *this = *this * o; }
  RingElem scaled(const Coords& c) const;
  RingElem shifted(int di, int dj) const;  // multiply by x^di y^dj
  RingElem pow(unsigned e) const;
  bool operator==(const RingElem& o) const { return terms_ == o.terms_; }
  bool operator!=(const RingElem& o) const { return !(*this == o); }

  // Same polynomial over a context whose tower extends this one's.
  RingElem embed(const CtxPtr& bigger) const;
  // Largest powers of x and y dividing every term.
  Mono min_exponents() const;

  std::string str() const;

 private:
  CtxPtr ctx_;
  Terms terms_;
};

// f = q*p + r with deg_y r < deg_y p; p must be monic in y with leading coefficient 1.
std::pair<RingElem, RingElem> divmod_y(const RingElem& f, const RingElem& p);

// Polynomial substitution x -> images[0], y -> images[1]; throws NotRegular if a
// negative exponent survives in the result.
RingElem substitute(const RingElem& f, const std::array<RingElem, 2>& images);
// Same, but negative exponents are allowed in images and result.
RingElem substitute_laurent(const RingElem& f, const std::array<RingElem, 2>& images);

// Least j with a nonzero coefficient at x^0 y^j; nullopt when x divides f.
std::optional<int> order_mod_x(const RingElem& f);

// R -> S given by the images of R's parameters.
struct ExtensionMap {
  CtxPtr source;
  CtxPtr target;
  std::array<RingElem, 2> images;
  int field_degree = 1;
  Integer residue_char = 0;
  std::optional<bool> unique;  // declared: the valuation has a unique extension

  ExtensionMap(CtxPtr src, std::array<RingElem, 2> imgs, int degree, Integer p, std::optional<bool> uniq = {});
  RingElem operator()(const RingElem& f) const;
};

struct MonomialForm {
  int a = 0, b = 0;
  RingElem gamma, f;
  int d = 0;
};

// u = gamma*x^a with gamma a unit and v = x^b*f with x not dividing f and f a non-unit;
// nullopt when the images are not of that shape.
std::optional<MonomialForm> monomialize_check(const ExtensionMap& ext);

}  // namespace valtool
