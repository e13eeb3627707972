#pragma once

#include "valtool/genseq.hpp"

#include <map>
#include <string>
#include <vector>

namespace valtool {

// Homogeneous element of gr: a formal combination of key monomials of one value.
struct GradedElem {
  Value value;
  TowerPtr tower;  // coefficient field of the terms
  std::vector<ExpTerm> terms;
};

// Minimal-value part of the expansion; throws InsufficientData when it cancels.
GradedElem initial_form(const RingElem& f, const GenSeq& g);
GradedElem graded_monomial(const GenSeq& g, std::vector<int> a);
GradedElem graded_mul(const GradedElem& a, const GradedElem& b);
GradedElem graded_pow(const GradedElem& a, int e, const GenSeq& g);
std::string graded_str(const GradedElem& e, const GenSeq& g);
// "in(x)", "in(y - x)", or "in(P5)" for long keys.
std::string form_name(const GenSeq& g, std::size_t j);
std::string monomial_str(const std::vector<int>& a, const GenSeq& g);

// Coordinates of a homogeneous element: residue against a reference monomial,
// one part per exponent of the last key when its n is unknown.
struct PieceCoords {
  TowerPtr tower;
  std::map<int, Coords> parts;
  bool is_zero() const;
};
PieceCoords piece_coords(const GradedElem& e, const GenSeq& g);
bool graded_equal(const GradedElem& a, const GradedElem& b, const GenSeq& g);

// Keys whose initial forms generate gr: the sigma indices plus a last key of unknown index.
std::vector<std::size_t> graded_generators(const GenSeq& g);

struct GradedRelation {
  Value value;
  TowerPtr tower;
  std::vector<ExpTerm> terms;
};

struct GradedPresentation {
  std::vector<std::size_t> generators;  // key indices
  std::vector<Value> values;
  std::vector<GradedRelation> relations;
  std::size_t depth = 0;
};

GradedPresentation graded_presentation(const GenSeq& g, std::size_t depth);
bool relation_vanishes(const GradedRelation& rel, const GenSeq& g);
std::string relation_str(const GradedRelation& rel, const GenSeq& g);

// Reduced exponent vectors over keys 0..upto of value gamma.
std::vector<std::vector<int>> graded_piece_basis(const Value& gamma, const GenSeq& g, std::size_t upto);
std::vector<std::vector<int>> graded_piece_basis(const Value& gamma, const GenSeq& g);

struct Membership {
  bool member = false;
  // Certificate: coefficients (in the ring's field) of monomials in the generators.
  std::vector<std::vector<int>> monomials;
  std::vector<Coords> coefficients;
  std::size_t candidates = 0;
  long rank = 0, rank_augmented = 0;
};

Membership subalgebra_membership(const GradedElem& e, const std::vector<GradedElem>& gens, const GenSeq& g);
std::string certificate_str(const Membership& m, const std::vector<std::string>& gen_names, const Tower& k);

struct AlignmentLevel {
  std::size_t s = 0;
  int r = -1;  // largest R generator level whose image lies in A_s
  std::optional<Integer> lambda, chi;
  std::optional<bool> new_form_member;  // level >= 1: is in Q_{tau_s} generated by the rest
  std::optional<std::pair<Value, Value>> matched;  // (beta_{sigma_{r+1}}, gamma_{tau_{s+1}})
  std::optional<bool> indices_agree;
};

struct AlignmentVerdict {
  bool consistent = false;
  std::size_t level = 0;
  std::string kind;
  std::string str() const;
};

struct AlignmentState {
  std::vector<std::size_t> r_gens, s_gens;
  std::vector<AlignmentLevel> levels;
  std::vector<std::string> image_relations;  // in(image of R generator) in S generators
  bool monotone = true;
  bool s_terminated = false;
  std::optional<Integer> e, f;
  bool int4 = false;
  AlignmentVerdict verdict;
  std::vector<std::string> notes;
};

AlignmentState fingen_detect(const GenSeq& gR, const GenSeq& gS, const ExtensionMap& ext, std::size_t depth);
// Verdict using only the levels up to depth.
AlignmentVerdict alignment_verdict(const AlignmentState& st, std::size_t depth);

struct IntegralRelation {
  Value value;
  int n1 = 1, b = 1;
  long a = 0;
  TowerElem xi;
  UPoly minpoly;  // over the field of R, monic
  std::size_t degree = 0;
  bool residue_zero = false;    // minpoly(xi) = 0 in the residue tower
  bool homogeneous = false;
  bool vanishes_in_gr = false;  // the lifted relation has value above its terms
  std::string text;
};

IntegralRelation integral_relation(const RingElem& f, const GenSeq& gR, const GenSeq& gS, const ExtensionMap& ext);

}  // namespace valtool
