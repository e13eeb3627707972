#pragma once

#include "valtool/tower.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace valtool {

// Error with a 1-based position; line 0 means "inside a single expression".
struct ParseError : Error {
  std::size_t line, column;
  ParseError(std::size_t l, std::size_t c, const std::string& what)
      : Error(ErrorKind::Parse, what), line(l), column(c) {}
};

// Sparse multivariate polynomial: exponent vector -> coefficient in the tower's top field.
using MPoly = std::map<std::vector<int>, Coords>;

// Infix grammar with + - * / ^ and parentheses; '/' only by constants.
// Identifiers are either listed variables or tower generator names.
MPoly parse_mpoly(std::string_view text, const std::vector<std::string>& vars, const TowerPtr& tower);

// Same grammar restricted to constants.
TowerElem parse_constant(std::string_view text, const TowerPtr& tower);

}  // namespace valtool
