#pragma once

#include "valtool/expr.hpp"
#include "valtool/extension.hpp"
#include "valtool/report.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace valtool {

struct ValuationDecl {
  std::string name, ring;
  GenSeqSpec spec;
  std::string oracle;  // embedding name, may be empty
  std::size_t line = 0;
};

struct EmbeddingDecl {
  std::string name, ring;
  std::shared_ptr<const SeriesEmbedding> emb;
  std::size_t line = 0;
};

struct ExtensionDecl {
  std::string name, from, to;
  std::shared_ptr<const ExtensionMap> map;
  std::string source_valuation, target_valuation;  // may be empty
  std::string local;                                // extension used for the local-degree route
  std::vector<std::string> candidates;              // valuation or embedding names over the target ring
  std::size_t line = 0;
};

struct Command {
  std::string verb;    // validate | eval | expand | blowup | graded | fingen | ramify | split
  std::string target;  // valuation or extension name
  std::string arg;
  std::size_t line = 0;
};

struct Scenario {
  TowerPtr tower;
  std::map<std::string, IrrationalPtr> irrationals;
  std::map<std::string, CtxPtr> rings;
  std::vector<ValuationDecl> valuations;
  std::vector<EmbeddingDecl> embeddings;
  std::vector<ExtensionDecl> extensions;
  std::vector<Command> commands;

  const ValuationDecl* valuation(const std::string& n) const;
  const EmbeddingDecl* embedding(const std::string& n) const;
  const ExtensionDecl* extension(const std::string& n) const;
};

// Throws ParseError with the line and column of the offending token.
Scenario parse_scenario(std::string_view text);

// Exact value such as "7/2", "2 + pi" or "1/2*tau - 3".
Value parse_value(std::string_view text, const std::map<std::string, IrrationalPtr>& irr);

// A [valuation] section reproducing spec (closure and oracle lines excluded).
std::string format_valuation(const std::string& name, const std::string& ring, const GenSeqSpec& spec);

struct RunOptions {
  std::size_t depth = 4;
  std::uint64_t seed = 1;
  Rational value_bound = 12;
};

struct CheckResult {
  bool ok = true;
  Report report;
};

// Builds every valuation and reports its checks.
CheckResult check_scenario(const Scenario& s);
Report run_scenario(const Scenario& s, const RunOptions& opt);

}  // namespace valtool
