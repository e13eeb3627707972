#pragma once

#include "valtool/numeric.hpp"

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace valtool {

// Nested rational intervals converging to an irrational constant.
class Irrational {
 public:
  Irrational(std::string name, std::vector<std::pair<Rational, Rational>> intervals);

  const std::string& name() const { return name_; }
  const std::vector<std::pair<Rational, Rational>>& intervals() const { return intervals_; }

  // Forty-digit decimal truncations of pi.
  static std::shared_ptr<const Irrational> pi();

 private:
  std::string name_;
  std::vector<std::pair<Rational, Rational>> intervals_;
};

using IrrationalPtr = std::shared_ptr<const Irrational>;

// q0 + q1*tau with tau irrational; tau is null in rank one.
struct Value {
  Rational q0;
  Rational q1;
  IrrationalPtr tau;

  Value() = default;
  Value(Rational a) : q0(std::move(a)) {}  // NOLINT
  Value(int a) : q0(a) {}                  // NOLINT
  Value(Rational a, Rational b, IrrationalPtr t) : q0(std::move(a)), q1(std::move(b)), tau(std::move(t)) {}

  bool is_rational() const { return q1 == 0; }
  Value& operator+=(const Value& o);
  Value& operator-=(const Value& o);
  Value operator-() const;
  friend Value operator+(Value a, const Value& b) { return a += b; }
  friend Value operator-(Value a, const Value& b) { return a -= b; }
  friend Value operator*(const Rational& k, const Value& v);
  friend bool operator==(const Value& a, const Value& b) { return a.q0 == b.q0 && a.q1 == b.q1; }
};

enum class Cmp { LT, EQ, GT };

// Refines tau's intervals until the sign of a-b is decided; caps at max_refinements
// intervals (0 means the whole table).
Cmp value_cmp(const Value& a, const Value& b, std::size_t max_refinements = 0);

inline bool operator<(const Value& a, const Value& b) { return value_cmp(a, b) == Cmp::LT; }
inline bool operator>(const Value& a, const Value& b) { return value_cmp(a, b) == Cmp::GT; }
inline bool operator<=(const Value& a, const Value& b) { return value_cmp(a, b) != Cmp::GT; }
inline bool operator>=(const Value& a, const Value& b) { return value_cmp(a, b) != Cmp::LT; }

// Shared irrational of a list of values, null if all are rational; mixing descriptors throws.
IrrationalPtr common_tau(const std::vector<Value>& vs);

std::string str(const Value& v);

// [G(big) : G(small)]; nullopt stands for an infinite index.
std::optional<Integer> group_index(const std::vector<Value>& big, const std::vector<Value>& small);

// Rank of the subgroup generated by vs.
int rational_rank(const std::vector<Value>& vs);

// Integer solution a of sum a_i*gens_i = target if one exists (gens must be independent).
std::optional<std::vector<Integer>> lattice_coords(const std::vector<Value>& gens, const Value& target);

// v lies in the group generated by gens.
bool in_group(const Value& v, const std::vector<Value>& gens);
// q with a = q*b, if any.
std::optional<Rational> value_ratio(const Value& a, const Value& b);
// Largest a >= 0 with a*b <= g, capped at cap; -1 when g < 0.
long floor_div(const Value& g, const Value& b, long cap);

}  // namespace valtool
