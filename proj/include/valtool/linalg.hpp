#pragma once

#include "valtool/numeric.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace valtool {

// Q (p = 0) or F_p with elements stored as reduced rationals / residues in [0, p).
struct BaseField {
  using Scalar = Rational;
  Integer p{0};

  Rational norm(const Rational& a) const {
    if (p == 0) return a;
    if (denom(a) == 1) return Rational(mod(numer(a), p));
    Integer n = mod(numer(a), p);
    Integer d = mod(denom(a), p);
    if (d == 0) fail(ErrorKind::Precondition, "denominator divisible by the characteristic");
    return Rational(mod(n * inverse_mod(d, p), p));
  }
  Rational add(const Rational& a, const Rational& b) const { return p == 0 ? a + b : norm(a + b); }
  Rational sub(const Rational& a, const Rational& b) const { return p == 0 ? a - b : norm(a - b); }
  Rational mul(const Rational& a, const Rational& b) const { return p == 0 ? a * b : norm(a * b); }
  Rational neg(const Rational& a) const { return p == 0 ? Rational(-a) : norm(-a); }
  Rational inv(const Rational& a) const {
    if (a == 0) fail(ErrorKind::Precondition, "inverse of zero");
    return p == 0 ? Rational(1) / a : Rational(inverse_mod(numer(a), p));
  }
  static bool zero(const Rational& a) { return a == 0; }
};

// In-place reduced row echelon form; returns pivot columns.
template <class Field>
std::vector<Eigen::Index> rref(const Field& F, Mat<typename Field::Scalar>& m) {
  std::vector<Eigen::Index> piv;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index sel = -1;
    for (Eigen::Index r = row; r < m.rows(); ++r)
      if (!F.zero(m(r, col))) { sel = r; break; }
    if (sel < 0) continue;
    if (sel != row) m.row(sel).swap(m.row(row));
    auto inv = F.inv(m(row, col));
    for (Eigen::Index c = col; c < m.cols(); ++c) m(row, c) = F.mul(m(row, c), inv);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || F.zero(m(r, col))) continue;
      auto k = m(r, col);
      for (Eigen::Index c = col; c < m.cols(); ++c) m(r, c) = F.sub(m(r, c), F.mul(k, m(row, c)));
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

template <class Field>
Eigen::Index rank(const Field& F, Mat<typename Field::Scalar> m) {
  return static_cast<Eigen::Index>(rref(F, m).size());
}

// Some x with a*x = b, or nullopt.
template <class Field>
std::optional<Vec<typename Field::Scalar>> solve(const Field& F, const Mat<typename Field::Scalar>& a,
                                                 const Vec<typename Field::Scalar>& b) {
  using S = typename Field::Scalar;
  Mat<S> aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  auto piv = rref(F, aug);
  if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
  Vec<S> x = Vec<S>::Constant(a.cols(), S(0));
  for (std::size_t r = 0; r < piv.size(); ++r) x(piv[r]) = aug(static_cast<Eigen::Index>(r), a.cols());
  return x;
}

// Incrementally grown echelon basis of a subspace of F^width.
template <class Field>
class Echelon {
 public:
  using Scalar = typename Field::Scalar;

  Echelon(Field f, Eigen::Index width) : f_(std::move(f)), width_(width) {}

  Eigen::Index rank() const { return static_cast<Eigen::Index>(rows_.size()); }

  // Reduces v against the basis; true when v lies in the span.
  bool reduce(Vec<Scalar>& v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      auto c = piv_[k];
      if (f_.zero(v(c))) continue;
      auto s = v(c);
      for (Eigen::Index j = c; j < width_; ++j) v(j) = f_.sub(v(j), f_.mul(s, rows_[k](j)));
    }
    for (Eigen::Index j = 0; j < width_; ++j)
      if (!f_.zero(v(j))) return false;
    return true;
  }

  bool contains(Vec<Scalar> v) const { return reduce(v); }

  // Adds v if independent; returns whether it was.
  bool insert(Vec<Scalar> v) {
    if (reduce(v)) return false;
    Eigen::Index c = 0;
    while (f_.zero(v(c))) ++c;
    auto inv = f_.inv(v(c));
    for (Eigen::Index j = c; j < width_; ++j) v(j) = f_.mul(v(j), inv);
    for (auto& r : rows_) {
      if (f_.zero(r(c))) continue;
      auto s = r(c);
      for (Eigen::Index j = c; j < width_; ++j) r(j) = f_.sub(r(j), f_.mul(s, v(j)));
    }
    std::size_t pos = 0;
    while (pos < piv_.size() && piv_[pos] < c) ++pos;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    piv_.insert(piv_.begin() + static_cast<std::ptrdiff_t>(pos), c);
    return true;
  }

 private:
  Field f_;
  Eigen::Index width_;
  std::vector<Vec<Scalar>> rows_;
  std::vector<Eigen::Index> piv_;
};

// Nonzero rows of the row Hermite normal form of an integer matrix.
Mat<Integer> hermite_rows(Mat<Integer> m);

}  // namespace valtool
