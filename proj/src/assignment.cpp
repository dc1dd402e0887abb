#include "boxlab/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "boxlab/rng.hpp"

namespace boxlab {

MatchResult match_anchors(std::span<const Box> anchors,
                          std::span<const Box> gts, double pos_threshold) {
  MatchResult result;
  result.anchors.resize(anchors.size());

  // best ground truth per anchor (ties to the lowest gt index)
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    AnchorRecord rec;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double v = iou(anchors[a], gts[g]);
      if (v > rec.best_iou) {
        rec.best_iou = v;
        rec.target_index = g;
      }
    }
    rec.kind = (!gts.empty() && rec.best_iou >= pos_threshold)
                   ? MatchKind::Positive
                   : MatchKind::Negative;
    result.anchors[a] = rec;
  }

  // each ground truth claims its best free anchor, promoting it if needed
  std::vector<bool> claimed(anchors.size(), false);
  for (std::size_t g = 0; g < gts.size(); ++g) {
    std::size_t best_a = anchors.size();
    double best_v = -1.0;
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      if (claimed[a]) continue;
      const double v = iou(anchors[a], gts[g]);
      if (v > best_v) {
        best_v = v;
        best_a = a;
      }
    }
    if (best_a == anchors.size()) break;  // more gts than anchors
    claimed[best_a] = true;
    result.anchors[best_a].kind = MatchKind::Positive;
    result.anchors[best_a].target_index = g;
    result.anchors[best_a].best_iou = best_v;
  }

  for (const auto& rec : result.anchors)
    if (rec.kind == MatchKind::Positive) ++result.n_positive;
  return result;
}

std::vector<std::size_t> mine_hard_negatives(
    std::span<const double> weighted_losses, const MatchResult& match,
    std::size_t ratio) {
  if (weighted_losses.size() != match.anchors.size())
    throw std::invalid_argument("losses must cover all anchors");
  if (ratio < 1) throw std::invalid_argument("mining ratio must be >= 1");

  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < match.anchors.size(); ++i)
    if (match.anchors[i].kind == MatchKind::Negative) negatives.push_back(i);

  const std::size_t budget = match.n_positive > 0
                                 ? ratio * match.n_positive
                                 : ratio;  // keep signal on empty images
  const std::size_t take = std::min(budget, negatives.size());

  std::sort(negatives.begin(), negatives.end(),
            [&](std::size_t a, std::size_t b) {
              if (weighted_losses[a] != weighted_losses[b])
                return weighted_losses[a] > weighted_losses[b];
              return a < b;
            });
  negatives.resize(take);
  std::sort(negatives.begin(), negatives.end());
  return negatives;
}

double size_iou_distance(const BoxSize& a, const BoxSize& b) {
  const double inter = std::min(a.w, b.w) * std::min(a.h, b.h);
  const double uni = a.w * a.h + b.w * b.h - inter;
  return 1.0 - inter / (uni + kDenomEpsilon);
}

namespace {

double size_distance(const BoxSize& a, const BoxSize& b,
                     ClusterDistance distance) {
  if (distance == ClusterDistance::IoU) return size_iou_distance(a, b);
  const double dw = a.w - b.w;
  const double dh = a.h - b.h;
  return std::sqrt(dw * dw + dh * dh);
}

std::vector<std::size_t> assign_points(const std::vector<BoxSize>& pts,
                                       const std::vector<BoxSize>& centroids,
                                       ClusterDistance distance) {
  std::vector<std::size_t> assign(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = size_distance(pts[i], centroids[c], distance);
      if (d < best) {
        best = d;
        assign[i] = c;
      }
    }
  }
  return assign;
}

double total_distortion(const std::vector<BoxSize>& pts,
                        const std::vector<BoxSize>& centroids,
                        const std::vector<std::size_t>& assign,
                        ClusterDistance distance) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    sum += size_distance(pts[i], centroids[assign[i]], distance);
  return sum;
}

std::vector<BoxSize> seed_centroids(const std::vector<BoxSize>& pts,
                                    std::size_t k, Rng& rng,
                                    ClusterDistance distance) {
  std::vector<BoxSize> centroids;
  centroids.push_back(pts[rng.next_index(pts.size())]);
  std::vector<double> dist(pts.size());
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centroids)
        best = std::min(best, size_distance(pts[i], c, distance));
      dist[i] = best * best;
      total += dist[i];
    }
    if (total <= 0.0) {
      // all remaining points coincide with a centroid; spread over indices
      centroids.push_back(pts[centroids.size() % pts.size()]);
      continue;
    }
    double u = rng.next_double() * total;
    std::size_t pick = pts.size() - 1;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      u -= dist[i];
      if (u <= 0.0) {
        pick = i;
        break;
      }
    }
    centroids.push_back(pts[pick]);
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans_anchors(std::span<const BoxSize> sizes, std::size_t k,
                            std::uint64_t seed, std::size_t max_iters,
                            ClusterDistance distance) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  if (k > sizes.size())
    throw std::invalid_argument("k exceeds the number of samples");
  for (const auto& s : sizes)
    if (!(s.w > 0.0) || !(s.h > 0.0) || !std::isfinite(s.w) ||
        !std::isfinite(s.h))
      throw std::invalid_argument("sizes must be positive and finite");

  // canonical order makes the result independent of input permutation
  std::vector<BoxSize> pts(sizes.begin(), sizes.end());
  std::sort(pts.begin(), pts.end(), [](const BoxSize& a, const BoxSize& b) {
    return a.w != b.w ? a.w < b.w : a.h < b.h;
  });

  Rng rng(seed);
  std::vector<BoxSize> centroids = seed_centroids(pts, k, rng, distance);
  std::vector<std::size_t> assign = assign_points(pts, centroids, distance);

  KMeansResult result;
  double best = total_distortion(pts, centroids, assign, distance);
  result.distortion_history.push_back(best);

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    // means of members; empty clusters re-seed to the farthest point
    std::vector<BoxSize> next(k, BoxSize{0.0, 0.0});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      next[assign[i]].w += pts[i].w;
      next[assign[i]].h += pts[i].h;
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        next[c].w /= static_cast<double>(counts[c]);
        next[c].h /= static_cast<double>(counts[c]);
      } else {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const double d =
              size_distance(pts[i], centroids[assign[i]], distance);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        next[c] = pts[far];
      }
    }

    std::vector<std::size_t> next_assign = assign_points(pts, next, distance);
    const double d = total_distortion(pts, next, next_assign, distance);
    // the mean update is a heuristic under IoU distance: accept the first
    // iteration unconditionally, then roll back any increase and stop
    if (iter > 0 && d > best) break;
    const bool stable = next_assign == assign;
    centroids = std::move(next);
    assign = std::move(next_assign);
    best = d;
    if (iter == 0) result.distortion_history.clear();
    result.distortion_history.push_back(best);
    result.iterations = iter + 1;
    if (stable) break;
  }

  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) ++counts[assign[i]];
  for (std::size_t c = 0; c < k; ++c)
    result.clusters.push_back({centroids[c].w, centroids[c].h, counts[c]});
  std::sort(result.clusters.begin(), result.clusters.end(),
            [](const SizeCluster& a, const SizeCluster& b) {
              return a.w != b.w ? a.w < b.w : a.h < b.h;
            });
  result.final_distortion = best;
  return result;
}

}  // namespace boxlab
