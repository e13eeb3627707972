#include "valtool/scenario.hpp"

#include "valtool/blowup.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace valtool {

namespace {

struct Token {
  std::string text;
  std::size_t col = 1;  // 1-based
};

struct Line {
  std::size_t no = 0;
  std::string raw;
};

[[noreturn]] void perr(std::size_t line, std::size_t col, const std::string& what) { throw ParseError(line, col, what); }

std::vector<Token> words(const std::string& s, std::size_t from = 0) {
  std::vector<Token> out;
  std::size_t i = from;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    out.push_back({s.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

// Text after the first n words, with its column.
Token rest_after(const std::string& s, std::size_t n) {
  std::size_t i = 0;
  for (std::size_t w = 0; w < n; ++w) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  std::size_t e = s.size();
  while (e > i && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return {s.substr(i, e - i), i + 1};
}

// Runs f, moving expression-relative parse errors to the given file position.
template <class F>
auto located(std::size_t line, std::size_t col, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    if (e.line != 0) throw;
    perr(line, col + e.column - 1, e.what());
  } catch (const Error& e) {
    perr(line, col, e.what());
  }
}

Rational parse_rational(const Token& t, std::size_t line) {
  return located(line, t.col, [&] {
    auto Q = Tower::base(0);
    return parse_constant(t.text, Q).coords()[0];
  });
}

long parse_int(const Token& t, std::size_t line, long lo) {
  Rational q = parse_rational(t, line);
  if (denom(q) != 1 || q < lo) perr(line, t.col, "expected an integer >= " + std::to_string(lo) + ", got '" + t.text + "'");
  return numer(q).convert_to<long>();
}

bool parse_bool(const Token& t, std::size_t line) {
  if (t.text == "yes" || t.text == "true") return true;
  if (t.text == "no" || t.text == "false") return false;
  perr(line, t.col, "expected yes or no, got '" + t.text + "'");
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string opt_str(const std::optional<Integer>& v, const char* none = "inf") { return v ? v->str() : none; }
template <class T>
std::string opt_int(const std::optional<T>& v, const char* none = "-") {
  return v ? std::to_string(*v) : none;
}

}  // namespace

Value parse_value(std::string_view text, const std::map<std::string, IrrationalPtr>& irr) {
  std::vector<std::string> names;
  for (const auto& [n, p] : irr) names.push_back(n);
  auto Q = Tower::base(0);
  MPoly p = parse_mpoly(text, names, Q);
  Value v;
  for (const auto& [e, c] : p) {
    int deg = 0;
    std::size_t which = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) {
        deg += e[i];
        which = i;
      }
    if (deg == 0) {
      v.q0 = c[0];
    } else if (deg == 1) {
      if (v.tau && v.tau != irr.at(names[which])) fail(ErrorKind::Parse, "a value may involve one irrational");
      v.tau = irr.at(names[which]);
      v.q1 = c[0];
    } else {
      fail(ErrorKind::Parse, "values are linear in the irrational");
    }
  }
  if (v.q1 == 0) v.tau.reset();
  return v;
}

const ValuationDecl* Scenario::valuation(const std::string& n) const {
  for (const auto& v : valuations)
    if (v.name == n) return &v;
  return nullptr;
}

const EmbeddingDecl* Scenario::embedding(const std::string& n) const {
  for (const auto& v : embeddings)
    if (v.name == n) return &v;
  return nullptr;
}

const ExtensionDecl* Scenario::extension(const std::string& n) const {
  for (const auto& v : extensions)
    if (v.name == n) return &v;
  return nullptr;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) {
    std::size_t no = 0;
    std::string cur;
    std::istringstream is{std::string(text)};
    while (std::getline(is, cur)) {
      ++no;
      auto hash = cur.find('#');
      if (hash != std::string::npos) cur.erase(hash);
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      if (words(cur).empty()) continue;
      lines_.push_back({no, cur});
    }
  }

  Scenario run() {
    s_.tower = Tower::base(0);
    std::size_t i = 0;
    while (i < lines_.size()) {
      const Line& h = lines_[i];
      auto w = words(h.raw);
      if (w[0].text.front() != '[') perr(h.no, w[0].col, "expected a section header, got '" + w[0].text + "'");
      auto close = h.raw.find(']');
      if (close == std::string::npos) perr(h.no, h.raw.size() + 1, "unterminated section header");
      auto hw = words(h.raw.substr(0, close));
      std::string kind = hw[0].text.substr(1);
      std::string name = hw.size() > 1 ? hw[1].text : "";
      std::size_t name_col = hw.size() > 1 ? hw[1].col : w[0].col;
      if (hw.size() > 2) perr(h.no, hw[2].col, "unexpected token '" + hw[2].text + "' in section header");
      std::size_t j = i + 1;
      while (j < lines_.size() && words(lines_[j].raw)[0].text.front() != '[') ++j;
      std::vector<const Line*> body;
      for (std::size_t k = i + 1; k < j; ++k) body.push_back(&lines_[k]);
      static const std::set<std::string> kinds{"field", "ring", "valuation", "embedding", "extension", "run"};
      if (!kinds.count(kind)) perr(h.no, w[0].col + 1, "unknown section '" + kind + "'");
      bool named = kind == "ring" || kind == "valuation" || kind == "embedding" || kind == "extension";
      if (named && name.empty()) perr(h.no, w[0].col, "section [" + kind + "] needs a name");
      if (!named && !name.empty()) perr(h.no, name_col, "section [" + kind + "] takes no name");
      if (named) declare(name, h.no, name_col);
      if (kind == "field") field(h, body);
      else if (kind == "ring") ring(name, h, body);
      else if (kind == "valuation") valuation(name, h, body);
      else if (kind == "embedding") embedding(name, h, body);
      else if (kind == "extension") extension(name, h, body);
      else run_section(body);
      i = j;
    }
    return s_;
  }

 private:
  std::vector<Line> lines_;
  Scenario s_;
  std::set<std::string> names_;
  bool field_seen_ = false, used_tower_ = false;

  void declare(const std::string& n, std::size_t line, std::size_t col) {
    if (!names_.insert(n).second) perr(line, col, "duplicate name '" + n + "'");
  }

  CtxPtr ring_ref(const Token& t, std::size_t line) {
    auto it = s_.rings.find(t.text);
    if (it == s_.rings.end()) perr(line, t.col, "undeclared ring '" + t.text + "'");
    return it->second;
  }

  void need(const std::vector<Token>& w, std::size_t n, const Line& l) {
    if (w.size() < n) perr(l.no, l.raw.size() + 1, "'" + w[0].text + "' needs " + std::to_string(n - 1) + " argument(s)");
    if (w.size() > n) perr(l.no, w[n].col, "unexpected token '" + w[n].text + "'");
  }

  void field(const Line& h, const std::vector<const Line*>& body) {
    if (field_seen_) perr(h.no, 1, "duplicate [field] section");
    if (used_tower_) perr(h.no, 1, "[field] must precede rings");
    field_seen_ = true;
    for (const Line* l : body) {
      auto w = words(l->raw);
      const std::string& k = w[0].text;
      if (k == "char") {
        need(w, 2, *l);
        long p = parse_int(w[1], l->no, 0);
        if (s_.tower->levels() > 0) perr(l->no, w[0].col, "char must precede levels");
        s_.tower = located(l->no, w[1].col, [&] { return Tower::base(p); });
      } else if (k == "level") {
        if (w.size() < 3) perr(l->no, l->raw.size() + 1, "level needs a name and a polynomial in T");
        Token poly = rest_after(l->raw, 2);
        s_.tower = located(l->no, poly.col, [&] {
          const std::size_t K = s_.tower->levels();
          MPoly p = parse_mpoly(poly.text, {"T"}, s_.tower);
          int deg = 0;
          for (const auto& [e, c] : p) deg = std::max(deg, e[0]);
          UPoly f(static_cast<std::size_t>(deg) + 1, s_.tower->zero(K));
          for (const auto& [e, c] : p) f[static_cast<std::size_t>(e[0])] = c;
          return tower_extend(s_.tower, w[1].text, f);
        });
      } else if (k == "irrational") {
        if (w.size() < 2) perr(l->no, l->raw.size() + 1, "irrational needs a name");
        const std::string& n = w[1].text;
        declare(n, l->no, w[1].col);
        if (w.size() == 2) {
          if (n != "pi") perr(l->no, w[1].col, "only pi is built in; give 'interval lo hi' tables for '" + n + "'");
          s_.irrationals[n] = Irrational::pi();
          continue;
        }
        std::vector<std::pair<Rational, Rational>> iv;
        std::size_t i = 2;
        while (i < w.size()) {
          const char* want = iv.empty() ? "interval" : "refine";
          if (w[i].text != want) perr(l->no, w[i].col, std::string("expected '") + want + "', got '" + w[i].text + "'");
          if (i + 2 >= w.size()) perr(l->no, l->raw.size() + 1, "interval needs two bounds");
          iv.push_back({parse_rational(w[i + 1], l->no), parse_rational(w[i + 2], l->no)});
          i += 3;
        }
        s_.irrationals[n] = located(l->no, w[1].col, [&] { return std::make_shared<const Irrational>(n, iv); });
      } else {
        perr(l->no, w[0].col, "unknown field setting '" + k + "'");
      }
    }
  }

  void ring(const std::string& name, const Line&, const std::vector<const Line*>& body) {
    std::array<std::string, 2> params{"x", "y"};
    for (const Line* l : body) {
      auto w = words(l->raw);
      if (w[0].text != "params") perr(l->no, w[0].col, "unknown ring setting '" + w[0].text + "'");
      need(w, 3, *l);
      if (w[1].text == w[2].text) perr(l->no, w[2].col, "parameters must differ");
      params = {w[1].text, w[2].text};
    }
    used_tower_ = true;
    s_.rings[name] = make_ctx(s_.tower, params);
  }

  int param_index(const CtxPtr& c, const Token& t, std::size_t line) {
    if (t.text == c->names[0]) return 0;
    if (t.text == c->names[1]) return 1;
    perr(line, t.col, "'" + t.text + "' is not a parameter of the ring");
  }

  void valuation(const std::string& name, const Line& h, const std::vector<const Line*>& body) {
    ValuationDecl d;
    d.name = name;
    d.line = h.no;
    bool beta_set[2] = {false, false};
    for (const Line* l : body) {
      auto w = words(l->raw);
      const std::string& k = w[0].text;
      if (k == "ring") {
        need(w, 2, *l);
        if (d.spec.ctx) perr(l->no, w[0].col, "ring already given");
        d.spec.ctx = ring_ref(w[1], l->no);
        d.ring = w[1].text;
        continue;
      }
      if (!d.spec.ctx) perr(l->no, w[0].col, "'ring' must come first in a valuation");
      if (k == "beta") {
        if (w.size() < 3) perr(l->no, l->raw.size() + 1, "beta needs a parameter and a value");
        int i = param_index(d.spec.ctx, w[1], l->no);
        Token v = rest_after(l->raw, 2);
        Value b = located(l->no, v.col, [&] { return parse_value(v.text, s_.irrationals); });
        (i == 0 ? d.spec.beta0 : d.spec.beta1) = b;
        beta_set[i] = true;
      } else if (k == "key") {
        key_line(d, *l);
      } else if (k == "closure") {
        Token v = rest_after(l->raw, 1);
        if (v.text.empty()) perr(l->no, l->raw.size() + 1, "closure needs a polynomial in T or 'transcendental'");
        if (v.text != "transcendental")
          located(l->no, v.col, [&] { return parse_mpoly(v.text, {"T"}, s_.tower); });
        d.spec.closure = v.text;
      } else if (k == "oracle") {
        need(w, 2, *l);
        const EmbeddingDecl* e = s_.embedding(w[1].text);
        if (!e) perr(l->no, w[1].col, "undeclared embedding '" + w[1].text + "'");
        if (e->ring != d.ring) perr(l->no, w[1].col, "embedding '" + w[1].text + "' is on ring '" + e->ring + "'");
        d.oracle = w[1].text;
      } else {
        perr(l->no, w[0].col, "unknown valuation setting '" + k + "'");
      }
    }
    if (!d.spec.ctx) perr(h.no, 1, "valuation '" + name + "' needs a ring");
    if (!beta_set[0] || !beta_set[1]) perr(h.no, 1, "valuation '" + name + "' needs beta for both parameters");
    s_.valuations.push_back(std::move(d));
  }

  // key Pk = P_{k-1}^n + tail value beta
  void key_line(ValuationDecl& d, const Line& l) {
    auto w = words(l.raw);
    const std::size_t k = d.spec.steps.size() + 2;
    const std::string want = "P" + std::to_string(k);
    if (w.size() < 2 || w[1].text != want)
      perr(l.no, w.size() > 1 ? w[1].col : l.raw.size() + 1, "expected key " + want + " (keys are declared in order)");
    if (w.size() < 3 || w[2].text != "=") perr(l.no, w.size() > 2 ? w[2].col : l.raw.size() + 1, "expected '='");
    Token rhs = rest_after(l.raw, 3);
    auto vpos = rhs.text.rfind(" value ");
    if (vpos == std::string::npos) perr(l.no, l.raw.size() + 1, "key needs ' value <value>'");
    Token expr{rhs.text.substr(0, vpos), rhs.col};
    Token val{rhs.text.substr(vpos + 7), rhs.col + vpos + 7};

    const CtxPtr& c = d.spec.ctx;
    std::vector<std::string> vars{"P0", "P1", c->names[0], c->names[1]};
    for (std::size_t j = 2; j < k; ++j) vars.push_back("P" + std::to_string(j));
    MPoly p = located(l.no, expr.col, [&] { return parse_mpoly(expr.text, vars, c->tower); });
    const std::size_t last = k - 1;
    std::map<std::vector<int>, Coords> terms;
    for (const auto& [e, coef] : p) {
      std::vector<int> sigma(k, 0);
      sigma[0] = e[0] + e[2];
      sigma[1] = e[1] + e[3];
      for (std::size_t j = 2; j < k; ++j) sigma[j] = e[j + 2];
      auto [it, fresh] = terms.emplace(sigma, coef);
      if (!fresh) it->second = c->tower->add(c->tower->levels(), it->second, coef);
    }
    int n = 0;
    for (const auto& [sigma, coef] : terms) n = std::max(n, sigma[last]);
    KeyStep step;
    step.n = n;
    std::vector<int> lead(k, 0);
    lead[last] = n;
    auto it = terms.find(lead);
    const std::size_t K = c->tower->levels();
    if (n < 1 || it == terms.end() || !Tower::is_zero(c->tower->sub(K, it->second, c->tower->constant(K, 1))))
      perr(l.no, expr.col, "the key must be " + (last < 2 ? c->names[last] : "P" + std::to_string(last)) +
                               "^n plus lower terms, with coefficient 1");
    for (const auto& [sigma, coef] : terms) {
      if (sigma == lead || Tower::is_zero(coef)) continue;
      if (sigma[last] >= n) perr(l.no, expr.col, "tail terms must have lower degree in the previous key");
      step.tail.push_back({coef, sigma});
    }
    step.beta = located(l.no, val.col, [&] { return parse_value(val.text, s_.irrationals); });
    d.spec.steps.push_back(std::move(step));
  }

  void embedding(const std::string& name, const Line& h, const std::vector<const Line*>& body) {
    EmbeddingDecl d;
    d.name = name;
    d.line = h.no;
    CtxPtr c;
    std::array<std::optional<Series>, 2> img;
    std::array<long, 2> prec{Series::kExact, Series::kExact};
    int m = 1, norm_param = 0;
    Rational norm_value = 1;
    for (const Line* l : body) {
      auto w = words(l->raw);
      const std::string& k = w[0].text;
      if (k == "ring") {
        need(w, 2, *l);
        c = ring_ref(w[1], l->no);
        d.ring = w[1].text;
        continue;
      }
      if (!c) perr(l->no, w[0].col, "'ring' must come first in an embedding");
      if (k == "prec") {
        need(w, 3, *l);
        prec[static_cast<std::size_t>(param_index(c, w[1], l->no))] = parse_int(w[2], l->no, 1);
      } else if (k == "ramification") {
        need(w, 2, *l);
        m = static_cast<int>(parse_int(w[1], l->no, 1));
      } else if (k == "normalize") {
        need(w, 3, *l);
        norm_param = param_index(c, w[1], l->no);
        norm_value = parse_rational(w[2], l->no);
      } else if (k == c->names[0] || k == c->names[1]) {
        Token t = rest_after(l->raw, 1);
        if (t.text.empty()) perr(l->no, l->raw.size() + 1, "missing series in t");
        Series s;
        MPoly p = located(l->no, t.col, [&] { return parse_mpoly(t.text, {"t"}, c->tower); });
        for (const auto& [e, coef] : p) s.terms.emplace(e[0], coef);
        img[static_cast<std::size_t>(param_index(c, w[0], l->no))] = s;
      } else {
        perr(l->no, w[0].col, "unknown embedding setting '" + k + "'");
      }
    }
    if (!c) perr(h.no, 1, "embedding '" + name + "' needs a ring");
    if (!img[0] || !img[1]) perr(h.no, 1, "embedding '" + name + "' needs a series for both parameters");
    img[0]->prec = prec[0];
    img[1]->prec = prec[1];
    d.emb = located(h.no, 1, [&] {
      return std::make_shared<const SeriesEmbedding>(c, c->tower, std::array<Series, 2>{*img[0], *img[1]}, m,
                                                     norm_param, norm_value);
    });
    s_.embeddings.push_back(std::move(d));
  }

  void extension(const std::string& name, const Line& h, const std::vector<const Line*>& body) {
    ExtensionDecl d;
    d.name = name;
    d.line = h.no;
    CtxPtr src, dst;
    std::array<std::optional<RingElem>, 2> img;
    int degree = 1;
    std::optional<Integer> p;
    std::optional<bool> unique;
    std::size_t cand_line = 0;
    std::vector<Token> cand;
    for (const Line* l : body) {
      auto w = words(l->raw);
      const std::string& k = w[0].text;
      if (k == "map") {
        need(w, 4, *l);
        if (w[2].text != "->") perr(l->no, w[2].col, "expected '->'");
        src = ring_ref(w[1], l->no);
        dst = ring_ref(w[3], l->no);
        d.from = w[1].text;
        d.to = w[3].text;
        continue;
      }
      if (!src) perr(l->no, w[0].col, "'map R -> S' must come first in an extension");
      if (k == "degree") {
        need(w, 2, *l);
        degree = static_cast<int>(parse_int(w[1], l->no, 1));
      } else if (k == "char") {
        need(w, 2, *l);
        p = parse_int(w[1], l->no, 0);
      } else if (k == "unique") {
        need(w, 2, *l);
        unique = parse_bool(w[1], l->no);
      } else if (k == "valuations") {
        need(w, 3, *l);
        for (int i = 0; i < 2; ++i) {
          const ValuationDecl* v = s_.valuation(w[i + 1].text);
          if (!v) perr(l->no, w[i + 1].col, "undeclared valuation '" + w[i + 1].text + "'");
          const std::string& want = i == 0 ? d.from : d.to;
          if (v->ring != want)
            perr(l->no, w[i + 1].col, "valuation '" + v->name + "' is on ring '" + v->ring + "', expected '" + want + "'");
        }
        d.source_valuation = w[1].text;
        d.target_valuation = w[2].text;
      } else if (k == "local") {
        need(w, 2, *l);
        if (!s_.extension(w[1].text)) perr(l->no, w[1].col, "undeclared extension '" + w[1].text + "'");
        d.local = w[1].text;
      } else if (k == "candidates") {
        if (w.size() < 2) perr(l->no, l->raw.size() + 1, "candidates needs at least one name");
        cand.assign(w.begin() + 1, w.end());
        cand_line = l->no;
      } else if (k == src->names[0] || k == src->names[1]) {
        Token t = rest_after(l->raw, 1);
        if (t.text.empty()) perr(l->no, l->raw.size() + 1, "missing image");
        img[static_cast<std::size_t>(param_index(src, w[0], l->no))] =
            located(l->no, t.col, [&] { return RingElem::parse(dst, t.text); });
      } else {
        perr(l->no, w[0].col, "unknown extension setting '" + k + "'");
      }
    }
    if (!src) perr(h.no, 1, "extension '" + name + "' needs 'map R -> S'");
    if (!img[0] || !img[1]) perr(h.no, 1, "extension '" + name + "' needs images of both parameters");
    for (const auto& t : cand) {
      const ValuationDecl* v = s_.valuation(t.text);
      const EmbeddingDecl* e = s_.embedding(t.text);
      if (!v && !e) perr(cand_line, t.col, "undeclared candidate '" + t.text + "'");
      if ((v ? v->ring : e->ring) != d.to) perr(cand_line, t.col, "candidate '" + t.text + "' is not on ring '" + d.to + "'");
      d.candidates.push_back(t.text);
    }
    d.map = located(h.no, 1, [&] {
      auto m = std::make_shared<const ExtensionMap>(src, std::array<RingElem, 2>{*img[0], *img[1]}, degree,
                                                    p.value_or(s_.tower->characteristic()), unique);
      for (const auto& im : m->images)
        if (im.is_unit() || im.is_zero()) fail(ErrorKind::Precondition, "images must lie in the maximal ideal");
      return m;
    });
    s_.extensions.push_back(std::move(d));
  }

  void run_section(const std::vector<const Line*>& body) {
    for (const Line* l : body) {
      auto w = words(l->raw);
      Command c;
      c.verb = w[0].text;
      c.line = l->no;
      static const std::set<std::string> val_cmds{"validate", "eval", "expand", "blowup", "graded"};
      static const std::set<std::string> ext_cmds{"fingen", "ramify", "split"};
      const bool on_val = val_cmds.count(c.verb) > 0;
      if (!on_val && !ext_cmds.count(c.verb)) perr(l->no, w[0].col, "unknown command '" + c.verb + "'");
      std::size_t used = 1;
      if (w.size() > 1 && (on_val ? s_.valuation(w[1].text) != nullptr : s_.extension(w[1].text) != nullptr)) {
        c.target = w[1].text;
        used = 2;
      } else if (!(on_val && c.verb == "validate")) {
        std::size_t count = on_val ? s_.valuations.size() : s_.extensions.size();
        if (count != 1)
          perr(l->no, w.size() > 1 ? w[1].col : w[0].col,
               std::string("'") + c.verb + "' must name " + (on_val ? "a valuation" : "an extension") +
                   (count ? " (several declared)" : " (none declared)"));
        c.target = on_val ? s_.valuations[0].name : s_.extensions[0].name;
      }
      Token arg = rest_after(l->raw, used);
      c.arg = arg.text;
      if (c.verb == "eval" || c.verb == "expand") {
        if (c.arg.empty()) perr(l->no, l->raw.size() + 1, "'" + c.verb + "' needs an element");
        CtxPtr ctx = s_.rings.at(s_.valuation(c.target)->ring);
        RingElem f = located(l->no, arg.col, [&] { return RingElem::parse(ctx, c.arg); });
        if (f.is_zero()) perr(l->no, arg.col, "the value of 0 is infinite");
      } else if (c.verb == "blowup" || c.verb == "graded" || c.verb == "fingen") {
        if (!c.arg.empty()) {
          auto aw = words(c.arg);
          if (aw.size() > 1) perr(l->no, arg.col + aw[1].col - 1, "unexpected token '" + aw[1].text + "'");
          parse_int(arg, l->no, c.verb == "graded" ? 0 : 1);
        }
      } else if (!c.arg.empty()) {
        perr(l->no, arg.col, "unexpected token '" + words(c.arg)[0].text + "'");
      }
      if (!on_val) {
        const ExtensionDecl* e = s_.extension(c.target);
        if (c.verb == "split" && e->candidates.empty())
          perr(l->no, w[0].col, "extension '" + e->name + "' declares no candidates");
        if (c.verb != "split" && e->source_valuation.empty())
          perr(l->no, w[0].col, "extension '" + e->name + "' declares no valuations");
        if (c.verb == "split" && e->source_valuation.empty())
          perr(l->no, w[0].col, "extension '" + e->name + "' declares no valuation of its source");
      }
      s_.commands.push_back(std::move(c));
    }
  }
};

std::string coef_term(const Tower& t, const Coords& c, const std::string& mono, bool first) {
  std::string f = t.format(c);
  bool one = f == "1", minus_one = f == "-1";
  bool simple = f.find(' ') == std::string::npos;
  std::string sign, body;
  if (simple && f[0] == '-') {
    sign = first ? "-" : " - ";
    body = minus_one && !mono.empty() ? "" : f.substr(1);
  } else {
    sign = first ? "" : " + ";
    body = one && !mono.empty() ? "" : (simple ? f : "(" + f + ")");
  }
  if (body.empty()) return sign + mono;
  return sign + body + (mono.empty() ? "" : "*" + mono);
}

std::string key_mono(const std::vector<int>& a, const std::function<std::string(std::size_t)>& name) {
  std::string s;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!a[j]) continue;
    if (!s.empty()) s += "*";
    s += name(j);
    if (a[j] != 1) s += "^" + std::to_string(a[j]);
  }
  return s;
}

}  // namespace

Scenario parse_scenario(std::string_view text) { return Parser(text).run(); }

std::string format_valuation(const std::string& name, const std::string& ring, const GenSeqSpec& spec) {
  const CtxPtr& c = spec.ctx;
  auto nm = [&](std::size_t j) { return j < 2 ? c->names[j] : "P" + std::to_string(j); };
  std::ostringstream os;
  os << "[valuation " << name << "]\n";
  os << "ring " << ring << "\n";
  os << "beta " << c->names[0] << " " << str(spec.beta0) << "\n";
  os << "beta " << c->names[1] << " " << str(spec.beta1) << "\n";
  for (std::size_t i = 0; i < spec.steps.size(); ++i) {
    const KeyStep& st = spec.steps[i];
    std::string e = nm(i + 1) + (st.n == 1 ? "" : "^" + std::to_string(st.n));
    for (const auto& t : st.tail) e += coef_term(*c->tower, t.c, key_mono(t.sigma, nm), false);
    os << "key P" << i + 2 << " = " << e << " value " << str(st.beta) << "\n";
  }
  return os.str();
}

namespace {

struct Built {
  std::optional<GenSeq> g;
  ValidationReport checks;
  std::string error;
};

class Runner {
 public:
  Runner(const Scenario& s, const RunOptions& o) : s_(s), o_(o) {}

  const Built& built(const std::string& name) {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;
    const ValuationDecl& d = *s_.valuation(name);
    const SeriesEmbedding* oracle = d.oracle.empty() ? nullptr : s_.embedding(d.oracle)->emb.get();
    Built b;
    try {
      auto [g, rep] = GenSeq::validate(d.spec, oracle);
      b.g = std::move(g);
      b.checks = std::move(rep);
      if (!b.checks.ok()) b.g.reset();
      if (!b.g) b.error = "valuation '" + name + "' failed validation";
    } catch (const Error& e) {
      b.error = "valuation '" + name + "': " + e.what();
    }
    return cache_.emplace(name, std::move(b)).first->second;
  }

  const GenSeq& seq(const std::string& name) {
    const Built& b = built(name);
    if (!b.g) fail(ErrorKind::Inconsistent, b.error);
    return *b.g;
  }

  Section validate(const std::string& name) {
    Section sec;
    sec.title = "validate " + name;
    const ValuationDecl& d = *s_.valuation(name);
    const Built& b = built(name);
    Table checks{"checks", {"check", "result", "detail"}, {}};
    for (const auto& c : b.checks.checks) checks.rows.push_back({c.name, c.pass ? "pass" : "FAIL", c.detail});
    if (!b.g) {
      sec.line("valuation " + name + " on " + d.ring + ": invalid");
      if (!b.error.empty()) sec.line("error: " + b.error);
      sec.table(std::move(checks));
      sec.fault = true;
      return sec;
    }
    const GenSeq& g = *b.g;
    const Tower& rt = *g.residue_tower();
    sec.line("valuation " + name + " on " + d.ring + ": " + std::to_string(g.size()) + " keys, " +
                        (g.terminated() ? "terminated" : "open") + (d.oracle.empty() ? "" : ", oracle " + d.oracle));
    Table keys{"keys", {"key", "polynomial", "value", "nbar", "n", "d", "alpha"}, {}};
    for (std::size_t j = 0; j < g.size(); ++j) {
      std::vector<std::string> row{g.key_name(j), g.key(j).str(), str(g.beta(j))};
      if (j == 0) {
        row.insert(row.end(), {"-", "-", "-", "-"});
      } else {
        const KeyInfo& I = g.info(j);
        row.push_back(opt_str(I.nbar));
        row.push_back(opt_int(I.n, "?"));
        row.push_back(opt_int(I.d, "?"));
        row.push_back(I.transcendental ? "transcendental"
                                       : (I.alpha ? rt.format(rt.lift(I.field_levels, rt.levels(), *I.alpha)) : "?"));
      }
      keys.rows.push_back(std::move(row));
    }
    sec.table(std::move(keys));
    sec.table(std::move(checks));
    if (rt.levels() > s_.tower->levels()) {
      for (std::size_t k = s_.tower->levels(); k < rt.levels(); ++k) {
        sec.line("residue level " + rt.level(k).name + ": " +
                            rt.format_poly(k, rt.level(k).minpoly, "T") + " = 0");
        if (rt.level(k).assumed) sec.warnings.push_back("irreducibility of " + rt.level(k).name + " assumed");
      }
    }
    return sec;
  }

  Section eval(const Command& c) {
    Section sec;
    sec.title = "eval " + c.target + " " + c.arg;
    const GenSeq& g = seq(c.target);
    RingElem f = RingElem::parse(g.ctx(), c.arg);
    std::optional<Value> v;
    try {
      v = g.evaluate(f);
      sec.line("value = " + str(*v));
    } catch (const Error& e) {
      if (e.kind != ErrorKind::InsufficientData) throw;
      sec.line("value: insufficient data (" + std::string(e.what()) + ")");
    }
    const ValuationDecl& d = *s_.valuation(c.target);
    if (!d.oracle.empty()) {
      auto w = s_.embedding(d.oracle)->emb->value(f);
      sec.line("oracle value = " + (w ? str(*w) : std::string("insufficient precision")));
      if (v && w) sec.line(std::string("agree: ") + yes_no(*v == *w));
    }
    return sec;
  }

  Section expand(const Command& c) {
    Section sec;
    sec.title = "expand " + c.target + " " + c.arg;
    const GenSeq& g = seq(c.target);
    RingElem f = RingElem::parse(g.ctx(), c.arg);
    PAdicExpansion e = g.expand(f);
    auto nm = [&](std::size_t j) { return g.key_name(j); };
    Table t{"expansion", {"coefficient", "monomial", "value"}, {}};
    for (const auto& term : e.terms) {
      std::string m = key_mono(term.a, nm);
      t.rows.push_back({e.tower->format(term.c), m.empty() ? "1" : m, str(term.value)});
    }
    sec.line(std::to_string(e.terms.size()) + " terms");
    if (e.last_exceeds) sec.warnings.push_back("an exponent of the last key is not reduced");
    sec.table(std::move(t));
    return sec;
  }

  Section blowup(const Command& c) {
    Section sec;
    int n = c.arg.empty() ? 1 : std::stoi(c.arg);
    sec.title = "blowup " + c.target + " " + std::to_string(n);
    const GenSeq& g = seq(c.target);
    ChainRecord ch = iterate_transforms(g, n);
    auto ring_label = [](const CtxPtr& x) { return "(" + x->names[0] + ", " + x->names[1] + ")"; };
    for (std::size_t k = 0; k < ch.steps.size(); ++k) {
      const FreeTransform& ft = ch.steps[k];
      const TransformMap& m = ft.map;
      auto im = m.images();
      sec.line("step " + std::to_string(k + 1) + ": " + ring_label(m.source) + " -> " + ring_label(m.target));
      sec.line("  " + m.source->names[0] + " = " + im[0].str());
      sec.line("  " + m.source->names[1] + " = " + im[1].str());
      auto inv = m.inverse_monomials();
      sec.line("  " + inv[0] + ", " + inv[1]);
      sec.line("  nbar = " + std::to_string(m.nbar) + ", w = " + std::to_string(m.w) + ", a = " +
                          std::to_string(m.a) + ", b = " + std::to_string(m.b) + ", eps = " + std::to_string(m.eps) +
                          ", center = " + m.center.str());
      Table keys{"target keys " + std::to_string(k + 1), {"key", "polynomial", "value"}, {}};
      for (std::size_t j = 0; j < ft.target.size(); ++j)
        keys.rows.push_back({ft.target.key_name(j), ft.target.key(j).str(), str(ft.target.beta(j))});
      sec.table(std::move(keys));
      Table sh{"shifts " + std::to_string(k + 1), {"i", "nbar_target", "nbar_source", "n_target", "n_source", "ok"}, {}};
      for (const auto& r : ft.shifts)
        sh.rows.push_back({std::to_string(r.i), opt_str(r.nbar_t), opt_str(r.nbar_s), opt_int(r.n_t, "?"),
                           opt_int(r.n_s, "?"), yes_no(r.ok)});
      sec.table(std::move(sh));
      std::size_t failed = 0;
      for (const auto& chk : ft.checks.checks)
        if (!chk.pass) {
          ++failed;
          sec.warnings.push_back("check failed: " + chk.name + " " + chk.detail);
        }
      sec.line("  checks: " + std::to_string(ft.checks.checks.size() - failed) + "/" +
                          std::to_string(ft.checks.checks.size()) + " pass");
      if (failed) sec.fault = true;
      sec.dot += "  \"" + ring_label(m.source) + "\" -> \"" + ring_label(m.target) + "\" [label=\"" + m.source->names[0] +
                 " = " + im[0].str() + "\\n" + m.source->names[1] + " = " + im[1].str() + "\"];\n";
    }
    if (!ch.stop_reason.empty()) sec.line("stopped: " + ch.stop_reason);
    return sec;
  }

  Section graded(const Command& c) {
    Section sec;
    std::size_t depth = c.arg.empty() ? o_.depth : std::stoul(c.arg);
    sec.title = "graded " + c.target + " " + std::to_string(depth);
    const GenSeq& g = seq(c.target);
    GradedPresentation p = graded_presentation(g, depth);
    Table gens{"generators", {"generator", "value"}, {}};
    for (std::size_t i = 0; i < p.generators.size(); ++i) gens.rows.push_back({form_name(g, p.generators[i]), str(p.values[i])});
    Table rels{"relations", {"value", "relation", "vanishes"}, {}};
    for (const auto& r : p.relations) rels.rows.push_back({str(r.value), relation_str(r, g), yes_no(relation_vanishes(r, g))});
    sec.line(std::to_string(p.generators.size()) + " generators, " + std::to_string(p.relations.size()) +
                        " relations" + (p.relations.empty() ? " (polynomial ring)" : ""));
    sec.table(std::move(gens));
    sec.table(std::move(rels));
    return sec;
  }

  void alignment_tables(Section& sec, const AlignmentState& st) {
    Table lv{"alignment", {"s", "r", "lambda", "chi", "new_form_member"}, {}};
    for (const auto& l : st.levels)
      lv.rows.push_back({std::to_string(l.s), std::to_string(l.r), opt_str(l.lambda), opt_str(l.chi),
                         l.new_form_member ? yes_no(*l.new_form_member) : "-"});
    sec.table(std::move(lv));
    for (const auto& r : st.image_relations) sec.line("  " + r);
  }

  Section fingen(const Command& c) {
    Section sec;
    std::size_t depth = c.arg.empty() ? o_.depth : std::stoul(c.arg);
    sec.title = "fingen " + c.target + " " + std::to_string(depth);
    const ExtensionDecl& e = *s_.extension(c.target);
    AlignmentState st = fingen_detect(seq(e.source_valuation), seq(e.target_valuation), *e.map, depth);
    sec.line("verdict: " + st.verdict.str());
    sec.line("e = " + opt_str(st.e, "?") + ", f = " + opt_str(st.f, "?") + ", lambda*chi = e*f: " +
                        yes_no(st.int4) + ", monotone: " + yes_no(st.monotone));
    sec.line("initial forms of the images:");
    alignment_tables(sec, st);
    for (const auto& n : st.notes) sec.warnings.push_back(n);
    return sec;
  }

  Section ramify(const Command& c) {
    Section sec;
    sec.title = "ramify " + c.target;
    const ExtensionDecl& e = *s_.extension(c.target);
    const ExtensionMap* local = e.local.empty() ? nullptr : s_.extension(e.local)->map.get();
    RamificationReport r =
        ramification_report(seq(e.source_valuation), seq(e.target_valuation), *e.map, o_.depth, local);
    const std::string es = opt_str(r.e, "?"), fs = opt_str(r.f, "?");
    sec.line("e = " + es);
    sec.line("f = " + fs);
    sec.line("delta = " + (r.delta ? std::to_string(*r.delta) : std::string("Undetermined")));
    sec.line("[K*:K] = " + std::to_string(e.map->field_degree) + ", p = " + e.map->residue_char.str());
    if (r.monomial)
      sec.line("monomial form" + std::string(local ? " (" + e.local + ")" : "") + ": a = " +
                          std::to_string(r.monomial->a) + ", b = " + std::to_string(r.monomial->b) +
                          ", d = " + std::to_string(r.monomial->d) + ", residue degree = " + std::to_string(r.res_degree));
    sec.line("routes agree: " + yes_no(r.routes_agree));
    sec.line("lambda*chi = e*f: " + yes_no(r.int4));
    if (r.int3) sec.line("e*f*p^delta = [K*:K]: " + yes_no(*r.int3));
    Table t{"ramification", {"route", "e", "f", "delta", "consistent"}, {}};
    for (const auto& rt : r.routes) {
      std::string d = rt.route == Route::Alignment ? "-" : (rt.delta ? std::to_string(*rt.delta) : "Undetermined");
      t.rows.push_back({to_string(rt.route), es, fs, d, yes_no(rt.consistent)});
      sec.line(std::string(to_string(rt.route)) + ": " + rt.note);
    }
    sec.table(std::move(t));
    for (const auto& cv : r.caveats) sec.warnings.push_back(cv);
    if (e.map->unique.value_or(false)) sec.warnings.push_back("unique extension declared, not proved");
    return sec;
  }

  Section split(const Command& c) {
    Section sec;
    sec.title = "split " + c.target;
    const ExtensionDecl& e = *s_.extension(c.target);
    std::vector<NamedCandidate> cands;
    for (const auto& n : e.candidates) {
      if (s_.valuation(n)) cands.push_back({n, seq(n)});
      else cands.push_back({n, *s_.embedding(n)->emb});
    }
    SplittingOptions so;
    so.value_bound = o_.value_bound;
    so.seed = o_.seed;
    SplittingReport r = splitting_report(cands, *e.map, seq(e.source_valuation), so);
    Table t{"candidates", {"candidate", "dominates", "restricts", "tested", "undecided", "diagnosis"}, {}};
    for (const auto& ck : r.candidates)
      t.rows.push_back({ck.name, yes_no(ck.dominates), yes_no(ck.restricts), std::to_string(ck.tested),
                        std::to_string(ck.undecided), ck.diagnosis});
    sec.table(std::move(t));
    sec.line("distinct extensions restricting to " + e.source_valuation + ": " + std::to_string(r.distinct()));
    sec.line(std::string("splits: ") + (r.splits() ? "yes" : "not witnessed"));
    for (const auto& cl : r.classes) {
      std::string s;
      for (const auto& n : cl) s += (s.empty() ? "" : " ") + n;
      sec.line("  class: " + s);
    }
    for (const auto& w : r.witnesses) sec.line("  witness: " + w);
    return sec;
  }

  Report run() {
    Report rep;
    for (const auto& c : s_.commands) {
      if (c.verb == "validate" && c.target.empty()) {
        for (const auto& v : s_.valuations) rep.sections.push_back(validate(v.name));
        continue;
      }
      Section sec;
      try {
        if (c.verb == "validate") sec = validate(c.target);
        else if (c.verb == "eval") sec = eval(c);
        else if (c.verb == "expand") sec = expand(c);
        else if (c.verb == "blowup") sec = blowup(c);
        else if (c.verb == "graded") sec = graded(c);
        else if (c.verb == "fingen") sec = fingen(c);
        else if (c.verb == "ramify") sec = ramify(c);
        else if (c.verb == "split") sec = split(c);
      } catch (const Error& e) {
        sec = Section{};
        sec.title = c.verb + " " + c.target + (c.arg.empty() ? "" : " " + c.arg);
        if (e.kind == ErrorKind::InsufficientData || e.kind == ErrorKind::InsufficientKeys) {
          sec.line(std::string("outcome: ") + e.what());
        } else {
          sec.line(std::string("error (line ") + std::to_string(c.line) + "): " + to_string(e.kind) + ": " +
                              e.what());
          sec.fault = true;
        }
      }
      rep.sections.push_back(std::move(sec));
    }
    return rep;
  }

 private:
  const Scenario& s_;
  const RunOptions& o_;
  std::map<std::string, Built> cache_;
};

}  // namespace

CheckResult check_scenario(const Scenario& s) {
  RunOptions o;
  Runner r(s, o);
  CheckResult out;
  for (const auto& v : s.valuations) {
    Section sec = r.validate(v.name);
    if (sec.fault) out.ok = false;
    out.report.sections.push_back(std::move(sec));
  }
  return out;
}

Report run_scenario(const Scenario& s, const RunOptions& opt) { return Runner(s, opt).run(); }

}  // namespace valtool
