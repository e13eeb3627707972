#include "valtool/series.hpp"

#include <algorithm>

namespace valtool {

std::optional<long> Series::order() const {
  for (const auto& [e, c] : terms)
    if (e < prec && !Tower::is_zero(c)) return e;
  return std::nullopt;
}

Series series_add(const Tower& t, const Series& a, const Series& b, bool subtract) {
  const auto k = t.levels();
  Series r;
  r.prec = std::min(a.prec, b.prec);
  for (const auto& [e, c] : a.terms)
    if (e < r.prec) r.terms.emplace(e, c);
  for (const auto& [e, c] : b.terms) {
    if (e >= r.prec) continue;
    auto it = r.terms.find(e);
    if (it == r.terms.end()) {
      r.terms.emplace(e, subtract ? t.neg(k, c) : c);
    } else {
      it->second = subtract ? t.sub(k, it->second, c) : t.add(k, it->second, c);
      if (Tower::is_zero(it->second)) r.terms.erase(it);
    }
  }
  return r;
}

Series series_mul(const Tower& t, const Series& a, const Series& b) {
  const auto k = t.levels();
  Series r;
  auto oa = a.order(), ob = b.order();
  if (!oa || !ob) {
    // Zero so far; the product is known only as far as the factors allow.
    long pa = oa ? *oa : a.prec, pb = ob ? *ob : b.prec;
    r.prec = std::min({Series::kExact, (a.exact() ? Series::kExact : a.prec + pb),
                       (b.exact() ? Series::kExact : b.prec + pa)});
    return r;
  }
  r.prec = std::min(a.exact() ? Series::kExact : a.prec + *ob, b.exact() ? Series::kExact : b.prec + *oa);
  for (const auto& [ea, ca] : a.terms) {
    if (ea >= a.prec) break;
    for (const auto& [eb, cb] : b.terms) {
      if (eb >= b.prec || ea + eb >= r.prec) break;
      Coords p = t.mul(k, ca, cb);
      auto it = r.terms.find(ea + eb);
      if (it == r.terms.end()) {
        r.terms.emplace(ea + eb, std::move(p));
      } else {
        it->second = t.add(k, it->second, p);
      }
    }
  }
  std::erase_if(r.terms, [](const auto& kv) { return Tower::is_zero(kv.second); });
  return r;
}

SeriesEmbedding::SeriesEmbedding(CtxPtr ctx, TowerPtr tower, std::array<Series, 2> images, int ramification,
                                 int normalize_param, Rational normalize_value)
    : ctx_(std::move(ctx)), tower_(std::move(tower)), images_(std::move(images)), m_(ramification) {
  if (!ctx_->tower->is_prefix_of(*tower_))
    fail(ErrorKind::Precondition, "series coefficients must extend the residue field");
  if (m_ < 1) fail(ErrorKind::Precondition, "ramification must be positive");
  for (const auto& s : images_) {
    auto o = s.order();
    if (!o) fail(ErrorKind::Precondition, "series image is zero to the known precision");
    if (*o <= 0) fail(ErrorKind::Precondition, "series image must lie in the maximal ideal");
  }
  if (normalize_param < 0 || normalize_param > 1 || normalize_value <= 0)
    fail(ErrorKind::Precondition, "bad normalization");
  scale_ = normalize_value / Rational(*images_[std::size_t(normalize_param)].order());
}

Series SeriesEmbedding::image(const RingElem& f) const {
  if (!f.ctx()->same_as(*ctx_)) fail(ErrorKind::Precondition, "embedding is defined on a different ring");
  if (!f.is_polynomial()) fail(ErrorKind::Precondition, "series image of a Laurent polynomial");
  const Tower& t = *tower_;
  const auto ks = f.tower().levels(), kt = t.levels();
  Series one;
  one.terms.emplace(0, t.constant(kt, 1));
  std::vector<Series> xp{one};
  for (int i = 1; i <= f.deg_x(); ++i) xp.push_back(series_mul(t, xp.back(), images_[0]));
  Series acc;
  auto it = f.terms().rbegin();
  for (int j = f.deg_y(); j >= 0; --j) {
    acc = series_mul(t, acc, images_[1]);
    for (; it != f.terms().rend() && it->first.j == j; ++it) {
      Series term = xp[std::size_t(it->first.i)];
      Coords c = t.lift(ks, kt, it->second);
      for (auto& [e, v] : term.terms) v = t.mul(kt, v, c);
      acc = series_add(t, acc, term);
    }
  }
  return acc;
}

std::optional<std::pair<Value, TowerElem>> SeriesEmbedding::leading(const RingElem& f) const {
  if (f.is_zero()) fail(ErrorKind::Precondition, "value of zero");
  Series s = image(f);
  auto o = s.order();
  if (!o) return std::nullopt;
  return std::make_pair(Value(scale_ * Rational(*o)), TowerElem(tower_, s.terms.at(*o)));
}

std::optional<Value> SeriesEmbedding::value(const RingElem& f) const {
  auto l = leading(f);
  if (!l) return std::nullopt;
  return l->first;
}

}  // namespace valtool
