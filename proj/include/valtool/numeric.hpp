#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <string_view>

namespace valtool {

namespace bmp = boost::multiprecision;

using Integer = bmp::number<bmp::gmp_int, bmp::et_off>;
using Rational = bmp::number<bmp::gmp_rational, bmp::et_off>;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class ErrorKind {
  Precondition,
  Undecided,
  Containment,
  NotField,
  InsufficientData,
  InsufficientKeys,
  Inconsistent,
  NotRegular,
  Parse,
  Internal,
};

const char* to_string(ErrorKind k);

struct Error : std::runtime_error {
  ErrorKind kind;
  Error(ErrorKind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& what) { throw Error(k, what); }

inline Integer numer(const Rational& q) { return bmp::numerator(q); }
inline Integer denom(const Rational& q) { return bmp::denominator(q); }
inline bool is_integer(const Rational& q) { return denom(q) == 1; }

Integer gcd(Integer a, Integer b);
Integer lcm(const Integer& a, const Integer& b);
// Non-negative residue of a modulo m > 0.
Integer mod(const Integer& a, const Integer& m);
Integer inverse_mod(const Integer& a, const Integer& m);
// (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
struct Bezout { Integer g, s, t; };
Bezout ext_gcd(const Integer& a, const Integer& b);

// Accepts "p", "-p", "p/q"; throws Parse on anything else.
Rational parse_rational(std::string_view s);
std::string str(const Rational& q);
std::string str(const Integer& z);

}  // namespace valtool
