#pragma once

#include "valtool/genseq.hpp"

#include <string>
#include <vector>

namespace valtool {

// The free transform R -> R_1 at the first jump sigma_1 of a sequence:
//   x = x1^nbar * Y^a,  ybar = x1^w * Y^b,  Y = y1 + center,
// where ybar = P_{sigma_1} = y + shift(x) and center = alpha_{sigma_1}^eps.
struct TransformMap {
  CtxPtr source, target;
  std::size_t sigma1 = 1;
  int nbar = 1, w = 1, a = 0, b = 1, eps = 1;
  RingElem shift;    // P_{sigma_1} - y, a polynomial in x alone
  TowerElem center;  // in the target's coefficient field

  // Images of the source parameters in the target ring.
  std::array<RingElem, 2> images() const;
  ExtensionMap as_extension() const;
  // "x1 = x^b*ybar^-a" and "y1 + center = x^-w*ybar^nbar" (exponents times eps).
  std::array<std::string, 2> inverse_monomials() const;
};

// Finds a, b, eps with nbar*b - w*a = eps = +-1, smallest a first, eps = +1 preferred.
void transform_exponents(int nbar, int w, int& a, int& b, int& eps);

// f = x1^lambda * Y^mu * st with st not divisible by x1 (st normalised so its
// lowest monomial has coefficient 1).
struct StrictTransform {
  int lambda = 0, mu = 0;
  RingElem st;
  TowerElem unit;  // st times unit equals the factor left after x1^lambda Y^mu
};

StrictTransform strict_transform_data(const RingElem& f, const TransformMap& m);
inline RingElem strict_transform(const RingElem& f, const TransformMap& m) { return strict_transform_data(f, m).st; }

// x^K * ybar^L * h written in the source parameters (ybar expanded), for h in the target ring.
struct Pullback {
  RingElem poly;
  int K = 0, L = 0;
};
Pullback pullback(const RingElem& h, const TransformMap& m);

struct ShiftRow {
  std::size_t i = 0;  // target index; compared with source index sigma1 + i
  std::optional<Integer> nbar_t, nbar_s;
  std::optional<int> d_t, d_s, n_t, n_s;
  bool ok = true;
};

struct FreeTransform {
  TransformMap map;
  GenSeq target;
  std::vector<ShiftRow> shifts;
  ValidationReport checks;
};

// Throws InsufficientKeys when the sequence has no jump followed by a key.
FreeTransform free_transform(const GenSeq& g);

struct ChainRecord {
  std::vector<FreeTransform> steps;
  std::string stop_reason;  // empty when all requested steps ran
};

ChainRecord iterate_transforms(const GenSeq& g, int count);

// Exponent bookkeeping for a source monomial prod P_{sigma_j}^{a_j} against P_{sigma_i}:
// t and lambda as integers; holds when t > lambda, or t == lambda in the exceptional case.
struct Lemma1Data {
  long t = 0, lambda = 0;
  bool exceptional = false;
  bool holds = false;
};
Lemma1Data lemma1_check(const GenSeq& g, const TransformMap& m, std::size_t i, const std::vector<int>& a_sigma);

}  // namespace valtool
