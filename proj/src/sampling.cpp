#include "boxlab/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace boxlab {

namespace {

// True when any pair of edges that can switch a min/max branch lies within
// `margin` of each other (in either axis), or the boxes are identical.
bool near_kink(const Box& p, const Box& t, double margin) {
  const double px[2] = {p.x1(), p.x2()};
  const double tx[2] = {t.x1(), t.x2()};
  const double py[2] = {p.y1(), p.y2()};
  const double ty[2] = {t.y1(), t.y2()};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (std::abs(px[i] - tx[j]) < margin) return true;
      if (std::abs(py[i] - ty[j]) < margin) return true;
    }
  return p == t;
}

double sample_side(Rng& rng) {
  // log-uniform over [0.2, 5] so small and large extents both appear
  return 0.2 * std::exp(rng.next_double() * std::log(25.0));
}

Box sample_target(Rng& rng) {
  return Box(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), sample_side(rng),
             sample_side(rng));
}

Box sample_pred(Rng& rng, const Box& t, OverlapRegime regime) {
  switch (regime) {
    case OverlapRegime::Contained: {
      const double w = t.w * rng.uniform(0.25, 0.7);
      const double h = t.h * rng.uniform(0.25, 0.7);
      const double cx = t.cx + rng.uniform(-0.4, 0.4) * (t.w - w) / 2.0;
      const double cy = t.cy + rng.uniform(-0.4, 0.4) * (t.h - h) / 2.0;
      return Box(cx, cy, w, h);
    }
    case OverlapRegime::Partial: {
      const double w = sample_side(rng);
      const double h = sample_side(rng);
      // center offset around half the combined extent: overlapping but
      // not nested in at least one axis
      const double sx = rng.next_double() < 0.5 ? -1.0 : 1.0;
      const double sy = rng.next_double() < 0.5 ? -1.0 : 1.0;
      const double cx = t.cx + sx * rng.uniform(0.3, 0.9) * (t.w + w) / 2.0;
      const double cy = t.cy + sy * rng.uniform(0.0, 0.9) * (t.h + h) / 2.0;
      return Box(cx, cy, w, h);
    }
    case OverlapRegime::Disjoint: {
      const double w = sample_side(rng);
      const double h = sample_side(rng);
      const double sx = rng.next_double() < 0.5 ? -1.0 : 1.0;
      const double cx = t.cx + sx * ((t.w + w) / 2.0 + rng.uniform(0.1, 3.0));
      const double cy = t.cy + rng.uniform(-2.0, 2.0);
      return Box(cx, cy, w, h);
    }
  }
  throw std::logic_error("unreachable regime");
}

}  // namespace

BoxPair sample_box_pair(Rng& rng, OverlapRegime regime, double margin) {
  for (;;) {
    const Box target = sample_target(rng);
    const Box pred = sample_pred(rng, target, regime);
    if (near_kink(pred, target, margin)) continue;
    const double overlap = iou(pred, target);
    if (regime == OverlapRegime::Disjoint && overlap != 0.0) continue;
    if (regime != OverlapRegime::Disjoint && overlap <= 0.0) continue;
    return {pred, target};
  }
}

BoxPair sample_box_pair(Rng& rng, std::size_t index, double margin) {
  static constexpr OverlapRegime kCycle[3] = {
      OverlapRegime::Disjoint, OverlapRegime::Partial, OverlapRegime::Contained};
  return sample_box_pair(rng, kCycle[index % 3], margin);
}

}  // namespace boxlab
