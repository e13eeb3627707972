#pragma once

#include "valtool/ring.hpp"

#include <climits>
#include <map>
#include <optional>

namespace valtool {

// Truncated power series in one variable s over a tower, known modulo s^prec.
struct Series {
  static constexpr long kExact = LONG_MAX / 4;

  std::map<long, Coords> terms;
  long prec = kExact;

  bool exact() const { return prec >= kExact; }
  // Leading exponent, or nullopt when every known coefficient vanishes.
  std::optional<long> order() const;
};

Series series_add(const Tower& t, const Series& a, const Series& b, bool subtract = false);
Series series_mul(const Tower& t, const Series& a, const Series& b);

// Parameters of a ring mapped to series in s = t^(1/m); the valuation is
// scale * ord_s, with scale fixed by one declared parameter value.
class SeriesEmbedding {
 public:
  SeriesEmbedding(CtxPtr ctx, TowerPtr tower, std::array<Series, 2> images, int ramification = 1,
                  int normalize_param = 0, Rational normalize_value = 1);

  const CtxPtr& ctx() const { return ctx_; }
  const TowerPtr& tower() const { return tower_; }
  const std::array<Series, 2>& images() const { return images_; }
  int ramification() const { return m_; }
  const Rational& scale() const { return scale_; }

  Series image(const RingElem& f) const;
  // nullopt means insufficient precision.
  std::optional<Value> value(const RingElem& f) const;
  // Value and leading coefficient of the image.
  std::optional<std::pair<Value, TowerElem>> leading(const RingElem& f) const;

 private:
  CtxPtr ctx_;
  TowerPtr tower_;
  std::array<Series, 2> images_;
  int m_;
  Rational scale_;
};

inline std::optional<Value> series_value(const RingElem& f, const SeriesEmbedding& e) { return e.value(f); }

}  // namespace valtool
