#include "valtool/report.hpp"

#include <algorithm>
#include <sstream>

namespace valtool {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void text_table(std::ostringstream& os, const Table& t) {
  std::vector<std::size_t> w(t.header.size(), 0);
  for (std::size_t i = 0; i < t.header.size(); ++i) w[i] = t.header[i].size();
  for (const auto& r : t.rows)
    for (std::size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], r[i].size());
  auto row = [&](const std::vector<std::string>& r) {
    std::string line = "  ";
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line += std::string(w[i] - r[i].size() + 2, ' ');
    }
    os << line << "\n";
  };
  if (!t.name.empty()) os << t.name << ":\n";
  row(t.header);
  for (const auto& r : t.rows) row(r);
}

}  // namespace

std::vector<std::string> Section::lines() const {
  std::vector<std::string> out;
  for (const auto& it : items)
    if (const auto* l = std::get_if<std::string>(&it)) out.push_back(*l);
  return out;
}

std::vector<const Table*> Section::tables() const {
  std::vector<const Table*> out;
  for (const auto& it : items)
    if (const auto* t = std::get_if<Table>(&it)) out.push_back(t);
  return out;
}

bool Report::faulted() const {
  return std::any_of(sections.begin(), sections.end(), [](const Section& s) { return s.fault; });
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  for (std::size_t k = 0; k < r.sections.size(); ++k) {
    const Section& s = r.sections[k];
    if (k) os << "\n";
    os << "== " << s.title << " ==\n";
    for (const auto& it : s.items) {
      if (const auto* l = std::get_if<std::string>(&it)) os << *l << "\n";
      else text_table(os, std::get<Table>(it));
    }
    for (const auto& w : s.warnings) os << "warning: " << w << "\n";
  }
  return os.str();
}

std::string render_csv(const Report& r) {
  std::ostringstream os;
  bool first = true;
  for (const auto& s : r.sections) {
    for (const Table* tp : s.tables()) {
      const Table& t = *tp;
      if (!first) os << "\n";
      first = false;
      os << "# " << s.title << (t.name.empty() ? "" : " / " + t.name) << "\n";
      for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << csv_field(t.header[i]);
      os << "\n";
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << "\n";
      }
    }
  }
  return os.str();
}

std::string render_dot(const Report& r) {
  std::ostringstream os;
  os << "digraph transforms {\n";
  for (const auto& s : r.sections) os << s.dot;
  os << "}\n";
  return os.str();
}

std::string render(const Report& r, Format f) {
  switch (f) {
    case Format::Csv:
      return render_csv(r);
    case Format::Dot:
      return render_dot(r);
    case Format::Text:
      break;
  }
  return render_text(r);
}

}  // namespace valtool
