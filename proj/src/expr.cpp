#include "valtool/expr.hpp"

#include <cctype>

namespace valtool {

namespace {

class Parser {
 public:
  Parser(std::string_view s, const std::vector<std::string>& vars, const TowerPtr& t)
      : s_(s), vars_(vars), t_(t), k_(t->levels()) {}

  MPoly run() {
    MPoly p = expr();
    skip();
    if (pos_ < s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  std::string_view s_;
  const std::vector<std::string>& vars_;
  const TowerPtr& t_;
  std::size_t k_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& what) const { throw ParseError(0, pos_ + 1, what); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::vector<int> zero_exp() const { return std::vector<int>(vars_.size(), 0); }

  MPoly constant(const Coords& c) const {
    MPoly p;
    if (!Tower::is_zero(c)) p[zero_exp()] = c;
    return p;
  }

  MPoly add(MPoly a, const MPoly& b, bool subtract) const {
    for (const auto& [e, c] : b) {
      auto it = a.find(e);
      Coords v = it == a.end() ? t_->zero(k_) : it->second;
      v = subtract ? t_->sub(k_, v, c) : t_->add(k_, v, c);
      if (Tower::is_zero(v)) {
        if (it != a.end()) a.erase(it);
      } else {
        a[e] = std::move(v);
      }
    }
    return a;
  }

  MPoly mul(const MPoly& a, const MPoly& b) const {
    MPoly out;
    for (const auto& [ea, ca] : a)
      for (const auto& [eb, cb] : b) {
        std::vector<int> e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out = add(std::move(out), MPoly{{e, t_->mul(k_, ca, cb)}}, false);
      }
    return out;
  }

  MPoly expr() {
    MPoly acc;
    bool first = true;
    while (true) {
      skip();
      bool minus = false;
      if (eat('+')) {
      } else if (eat('-')) {
        minus = true;
      } else if (!first) {
        break;
      }
      MPoly t = term();
      acc = add(std::move(acc), t, minus);
      first = false;
    }
    return acc;
  }

  MPoly term() {
    MPoly acc = power();
    while (true) {
      if (eat('*')) {
        acc = mul(acc, power());
      } else if (eat('/')) {
        MPoly d = power();
        if (d.size() != 1 || d.begin()->first != zero_exp()) error("division only by nonzero constants");
        Coords inv = t_->inv(k_, d.begin()->second);
        acc = mul(acc, constant(inv));
      } else {
        break;
      }
    }
    return acc;
  }

  MPoly power() {
    MPoly base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) error("expected a non-negative integer exponent");
      long e = std::stol(std::string(s_.substr(start, pos_ - start)));
      MPoly r = constant(t_->constant(k_, 1));
      for (long i = 0; i < e; ++i) r = mul(r, base);
      return r;
    }
    return base;
  }

  MPoly atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MPoly p = expr();
      if (!eat(')')) error("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      MPoly p = atom();
      return add(MPoly{}, p, true);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return constant(t_->constant(k_, Rational(Integer(std::string(s_.substr(start, pos_ - start))))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) {
          auto e = zero_exp();
          e[i] = 1;
          return MPoly{{e, t_->constant(k_, 1)}};
        }
      }
      for (std::size_t j = 0; j < k_; ++j)
        if (t_->level(j).name == name) return constant(t_->generator(k_, j));
      pos_ = start;
      error("undeclared name '" + name + "'");
    }
    error("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

MPoly parse_mpoly(std::string_view text, const std::vector<std::string>& vars, const TowerPtr& tower) {
  return Parser(text, vars, tower).run();
}

TowerElem parse_constant(std::string_view text, const TowerPtr& tower) {
  MPoly p = parse_mpoly(text, {}, tower);
  if (p.empty()) return TowerElem::zero(tower);
  return TowerElem(tower, p.begin()->second);
}

}  // namespace valtool
