#pragma once

#include <string>
#include <variant>
#include <vector>

namespace valtool {

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Section {
  std::string title;  // the command as written
  std::vector<std::variant<std::string, Table>> items;  // in output order
  std::vector<std::string> warnings;
  std::string dot;  // edges of a transform chain, may be empty
  bool fault = false;

  void line(std::string s) { items.emplace_back(std::move(s)); }
  void table(Table t) { items.emplace_back(std::move(t)); }
  std::vector<std::string> lines() const;
  std::vector<const Table*> tables() const;
};

struct Report {
  std::vector<Section> sections;
  bool faulted() const;
};

enum class Format { Text, Csv, Dot };

std::string render(const Report& r, Format f);
std::string render_text(const Report& r);
// One block per table: "# title / table" then the header and rows.
std::string render_csv(const Report& r);
std::string render_dot(const Report& r);

}  // namespace valtool
