#pragma once

#include "valtool/graded.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace valtool {

// delta with [K*:K] = e f p^delta; nullopt (Undetermined) without a declared unique extension.
// Throws Inconsistent when the quotient is not a power of p (or not 1 when p = 0).
std::optional<int> defect_ostrowski(int field_degree, const Integer& e, const Integer& f, const Integer& p,
                                    bool unique);

// delta with a d [S1/m : R1/m] = e f p^delta.
int defect_local_degree(const MonomialForm& mf, int res_degree, const Integer& e, const Integer& f, const Integer& p);

enum class Route { Alignment, Ostrowski, LocalDegree };
const char* to_string(Route r);

struct RouteResult {
  Route route = Route::Alignment;
  bool applicable = false;
  std::optional<int> delta;
  bool consistent = true;
  std::string note;
};

struct RamificationReport {
  std::optional<Integer> e, f;
  std::optional<int> delta;  // empty: Undetermined
  std::vector<RouteResult> routes;
  bool routes_agree = true;
  bool int4 = false;                // lambda chi = e f from the alignment
  std::optional<bool> int3;         // lambda chi p^delta = [K*:K], when delta is known
  std::optional<MonomialForm> monomial;
  int res_degree = 1;
  AlignmentState alignment;
  std::vector<std::string> caveats;
};

// e, f from the alignment detector; delta from every route whose hypotheses hold.
// local is the pair used for the local-degree formula (ext itself when null).
RamificationReport ramification_report(const GenSeq& gR, const GenSeq& gS, const ExtensionMap& ext,
                                       std::size_t depth, const ExtensionMap* local = nullptr);

using Candidate = std::variant<GenSeq, SeriesEmbedding>;

struct NamedCandidate {
  std::string name;
  Candidate valuation;
};

struct CandidateCheck {
  std::string name;
  bool dominates = false;
  bool restricts = false;
  std::size_t tested = 0, undecided = 0;
  std::string diagnosis;
};

struct SplittingReport {
  std::vector<CandidateCheck> candidates;
  // Classes of candidates restricting to the valuation of R, separated by a decided difference.
  std::vector<std::vector<std::string>> classes;
  std::size_t distinct() const { return classes.size(); }
  bool splits() const { return classes.size() >= 2; }
  // Elements of S on which two classes differ, with both values.
  std::vector<std::string> witnesses;
};

struct SplittingOptions {
  Rational value_bound = 12;
  std::uint64_t seed = 1;
  int samples = 40;
};

SplittingReport splitting_report(const std::vector<NamedCandidate>& candidates, const ExtensionMap& ext,
                                 const GenSeq& gR, const SplittingOptions& opt = {});

// Value of f under a candidate; nullopt when undecided.
std::optional<Value> candidate_value(const Candidate& c, const RingElem& f);

}  // namespace valtool
