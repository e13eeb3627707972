#pragma once

#include "valtool/linalg.hpp"
#include "valtool/numeric.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace valtool {

// Flat coordinates over the base field in the mixed-radix power basis of the tower.
using Coords = std::vector<Rational>;
// Univariate polynomial over the field of some tower level, low degree first.
using UPoly = std::vector<Coords>;

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

// Q or F_p followed by simple extensions; level k adjoins a root of a monic
// polynomial over the field K_k generated by the first k levels.
class Tower {
 public:
  struct Level {
    std::string name;
    UPoly minpoly;  // monic, coefficients in K_k, leading 1 included
    bool assumed = false;  // irreducibility not verified
  };

  static TowerPtr base(const Integer& p);

  const Integer& characteristic() const { return field_.p; }
  const BaseField& field() const { return field_; }
  std::size_t levels() const { return levels_.size(); }
  const Level& level(std::size_t k) const { return levels_[k]; }
  std::size_t degree(std::size_t k) const { return levels_[k].minpoly.size() - 1; }
  // Dimension of K_k over the base; dim() is the whole tower.
  std::size_t dim(std::size_t k) const { return dims_[k]; }
  std::size_t dim() const { return dims_.back(); }

  // Field operations in K_k on coordinate vectors of length dim(k).
  Coords zero(std::size_t k) const { return Coords(dim(k), Rational(0)); }
  Coords constant(std::size_t k, const Rational& c) const;
  Coords add(std::size_t k, const Coords& a, const Coords& b) const;
  Coords sub(std::size_t k, const Coords& a, const Coords& b) const;
  Coords neg(std::size_t k, const Coords& a) const;
  Coords mul(std::size_t k, const Coords& a, const Coords& b) const;
  Coords inv(std::size_t k, const Coords& a) const;
  Coords pow(std::size_t k, Coords a, long e) const;
  static bool is_zero(const Coords& a);
  // Generator of level j as an element of K_k (j < k).
  Coords generator(std::size_t k, std::size_t j) const;
  // K_j -> K_k by zero padding (j <= k).
  Coords lift(std::size_t j, std::size_t k, const Coords& a) const;
  // The K_j coordinates of a, if a lies in K_j.
  std::optional<Coords> drop(std::size_t k, std::size_t j, const Coords& a) const;

  // Polynomials over K_k.
  UPoly poly_mul(std::size_t k, const UPoly& a, const UPoly& b) const;
  UPoly poly_sub(std::size_t k, const UPoly& a, const UPoly& b) const;
  // Quotient and remainder by a nonzero divisor.
  std::pair<UPoly, UPoly> poly_divmod(std::size_t k, const UPoly& a, const UPoly& b) const;
  Coords poly_eval(std::size_t k, const UPoly& f, const Coords& x) const;
  void trim(UPoly& f) const;

  // Prefix of the first k levels as a tower in its own right.
  TowerPtr prefix(std::size_t k) const;
  // Whether this tower's levels are the leading levels of other.
  bool is_prefix_of(const Tower& other) const;
  bool same_as(const Tower& other) const { return is_prefix_of(other) && levels() == other.levels(); }

  std::string format(const Coords& a) const;
  std::string format_poly(std::size_t k, const UPoly& f, const std::string& var) const;

  // Every element of K_k when the tower is finite and small enough.
  std::optional<std::vector<Coords>> enumerate(std::size_t k, std::size_t cap) const;

  friend TowerPtr tower_extend(const TowerPtr& t, const std::string& name, const UPoly& minpoly);

 private:
  BaseField field_;
  std::vector<Level> levels_;
  std::vector<std::size_t> dims_{1};

  Coords chunk(std::size_t k, const Coords& a, std::size_t i) const;
};

// Adds a level; throws NotField on a degree-1 polynomial or on a reducibility witness.
TowerPtr tower_extend(const TowerPtr& t, const std::string& name, const UPoly& minpoly);

class TowerElem {
 public:
  TowerElem() = default;
  TowerElem(TowerPtr t, Coords c);
  static TowerElem zero(const TowerPtr& t) { return {t, t->zero(t->levels())}; }
  static TowerElem constant(const TowerPtr& t, const Rational& c) { return {t, t->constant(t->levels(), c)}; }
  static TowerElem generator(const TowerPtr& t, std::size_t j) { return {t, t->generator(t->levels(), j)}; }

  const TowerPtr& tower() const { return t_; }
  const Coords& coords() const { return c_; }
  bool is_zero() const { return Tower::is_zero(c_); }
  bool is_one() const;

  TowerElem operator+(const TowerElem& o) const;
  TowerElem operator-(const TowerElem& o) const;
  TowerElem operator-() const;
  TowerElem operator*(const TowerElem& o) const;
  TowerElem inverse() const;
  TowerElem operator/(const TowerElem& o) const { return *this * o.inverse(); }
  TowerElem pow(long e) const;
  bool operator==(const TowerElem& o) const;
  bool operator!=(const TowerElem& o) const { return !(*this == o); }

  // Same element inside a tower having this one's tower as prefix.
  TowerElem embed(const TowerPtr& bigger) const;
  std::string str() const { return t_->format(c_); }

 private:
  TowerPtr t_;
  Coords c_;
};

// Subfield of a tower generated over the base by its first `levels` generators and extra elements.
struct Subfield {
  TowerPtr tower;
  std::size_t levels = 0;
  std::vector<Coords> extra;
};

// Dimension over the base field of a subfield.
std::size_t subfield_dim(const Subfield& f);
// Degree of e's minimal polynomial over sub.
std::size_t degree_over(const TowerElem& e, const Subfield& sub);
// Minimal polynomial of e over K_k (prefix of e's tower), monic, coefficients in K_k.
UPoly minimal_polynomial(const TowerElem& e, std::size_t k);

}  // namespace valtool
