#pragma once

#include "valtool/ring.hpp"
#include "valtool/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace valtool {

// c * P_0^sigma[0] * ... * P_i^sigma[i] with c a nonzero constant of the ring's residue field.
struct TailTerm {
  Coords c;
  std::vector<int> sigma;
};

// P_{i+1} = P_i^n + sum of tail terms, with assigned value beta of P_{i+1}.
struct KeyStep {
  int n = 1;
  std::vector<TailTerm> tail;
  Value beta;
};

struct GenSeqSpec {
  CtxPtr ctx;
  Value beta0 = 1, beta1 = 1;
  std::vector<KeyStep> steps;
  // Residue data for the last key: a monic polynomial in T over the residue
  // tower whose root is alpha_r, or "transcendental".
  std::optional<std::string> closure;
  // Same as closure, given directly (used when non-empty).
  UPoly closure_poly;
};

// Derived data of key j >= 1. Unknown entries are empty.
struct KeyInfo {
  std::optional<Integer> nbar;  // empty: infinite index
  std::vector<int> w;           // U_j exponents over P_0..P_{j-1}
  std::optional<int> d, n;
  std::optional<Coords> alpha;  // in the residue tower
  UPoly f;                      // minimal polynomial of alpha over the previous residue field
  std::size_t field_levels = 0;  // residue tower levels needed to hold alpha
  bool from_oracle = false;
  bool transcendental = false;  // alpha not algebraic: the sequence stops here
};

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<Check> checks;
  bool ok() const;
  void add(std::string name, bool pass, std::string detail = {});
};

struct ExpTerm {
  Coords c;
  std::vector<int> a;  // exponents of P_0..P_r
  Value value;
};

struct PAdicExpansion {
  TowerPtr tower;
  std::vector<ExpTerm> terms;  // ascending value, then exponents
  // Some exponent of the last key reaches its n (or n is unknown and exponents differ).
  bool last_exceeds = false;
};

class GenSeq {
 public:
  // Derives all key data; the report lists every check. Returns no sequence
  // when the data is too broken to continue.
  static std::pair<std::optional<GenSeq>, ValidationReport> validate(const GenSeqSpec& spec,
                                                                      const SeriesEmbedding* oracle = nullptr);
  // Throws Inconsistent on the first failed check.
  static GenSeq build(const GenSeqSpec& spec, const SeriesEmbedding* oracle = nullptr);

  const CtxPtr& ctx() const { return ctx_; }
  const GenSeqSpec& spec() const { return spec_; }
  const TowerPtr& residue_tower() const { return residue_; }
  std::size_t size() const { return keys_.size(); }
  std::size_t last() const { return keys_.size() - 1; }
  const RingElem& key(std::size_t j) const { return keys_[j]; }
  const Value& beta(std::size_t j) const { return betas_[j]; }
  const std::vector<Value>& betas() const { return betas_; }
  const KeyInfo& info(std::size_t j) const { return info_[j]; }
  std::string key_name(std::size_t j) const;
  bool terminated() const;

  // Keys 0..m, keeping the residue data of key m derived from its step.
  GenSeq prefix(std::size_t m) const;

  std::vector<std::size_t> sigma_indices() const;

  // gamma = sum a_j beta_j over keys 0..upto with 0 <= a_j < n_j (j >= 1), largest exponents first.
  std::optional<std::vector<int>> represent(const Value& gamma, std::size_t upto) const;
  std::optional<std::vector<int>> represent(const Value& gamma) const { return represent(gamma, last()); }

  Value monomial_value(const std::vector<int>& a) const;
  // Residue of a value-zero Laurent monomial in the keys, in the residue tower.
  TowerElem residue_of_monomial(const std::vector<int>& m) const;

  PAdicExpansion expand(const RingElem& f) const;
  Value evaluate(const RingElem& f) const;
  // [f / P^m] for a monomial of the same value, in the larger of the residue tower and f's tower.
  TowerElem residue_over(const RingElem& f, const std::vector<int>& m) const;
  // [f / g] for f, g of equal value.
  TowerElem residue_ratio(const RingElem& f, const RingElem& g) const;

 private:
  GenSeq() = default;

  CtxPtr ctx_;
  GenSeqSpec spec_;
  TowerPtr residue_;
  std::vector<RingElem> keys_;
  std::vector<Value> betas_;
  std::vector<KeyInfo> info_;

  // Tower containing both the residue tower and t.
  TowerPtr working_tower(const TowerPtr& t) const;
  // Sum of c_l [P^a_l / P^ref] over the first count terms of an expansion.
  TowerElem group_residue(const PAdicExpansion& e, std::size_t count, const std::vector<int>& ref) const;
};

// Value-zero Laurent monomial residue as a free function over a sequence.
inline TowerElem residue_of_monomial(const std::vector<int>& m, const GenSeq& g) { return g.residue_of_monomial(m); }

}  // namespace valtool
