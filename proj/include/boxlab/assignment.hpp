#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "boxlab/geometry.hpp"

namespace boxlab {

enum class MatchKind { Positive, Negative };

// Per-anchor assignment outcome. For positives target_index names the
// matched ground truth and best_iou is the overlap with it; for negatives
// best_iou is the best overlap with any ground truth.
struct AnchorRecord {
  MatchKind kind = MatchKind::Negative;
  std::size_t target_index = 0;
  double best_iou = 0.0;
};

struct MatchResult {
  std::vector<AnchorRecord> anchors;
  std::size_t n_positive = 0;
};

// Matches anchors to ground truths. Each ground truth first claims its
// best-overlap anchor (in ground-truth order, ties to the lowest anchor
// index, already-claimed anchors skipped), so every object keeps at least
// one positive anchor even below the threshold. Remaining anchors are
// positive iff their best overlap reaches pos_threshold.
MatchResult match_anchors(std::span<const Box> anchors,
                          std::span<const Box> gts,
                          double pos_threshold = 0.5);

// Picks the min(ratio * n_positive, #negatives) negatives with the highest
// weighted loss, ties to the lower index. With no positives a floor of
// `ratio` negatives keeps some training signal. Returns ascending indices.
std::vector<std::size_t> mine_hard_negatives(
    std::span<const double> weighted_losses, const MatchResult& match,
    std::size_t ratio = 3);

struct BoxSize {
  double w = 0.0, h = 0.0;
};

struct SizeCluster {
  double w = 0.0, h = 0.0;
  std::size_t member_count = 0;
};

enum class ClusterDistance { IoU, Euclidean };

struct KMeansResult {
  std::vector<SizeCluster> clusters;  // sorted by (w, h)
  std::vector<double> distortion_history;
  std::size_t iterations = 0;
  double final_distortion = 0.0;
};

// Lloyd iteration over (w, h) samples with distance 1 - IoU of the two
// sizes anchored at a common center (Euclidean selectable for comparison).
// Seeding is k-means++-style from the given stream; input order never
// matters because samples are canonicalized first. Centroid updates are
// componentwise means; an update that would raise total distortion is
// rolled back and iteration stops, so the recorded distortions never
// increase. Empty clusters re-seed to the point farthest from its
// centroid.
KMeansResult kmeans_anchors(std::span<const BoxSize> sizes, std::size_t k,
                            std::uint64_t seed, std::size_t max_iters = 100,
                            ClusterDistance distance = ClusterDistance::IoU);

// 1 - IoU of two sizes anchored at a common center.
double size_iou_distance(const BoxSize& a, const BoxSize& b);

}  // namespace boxlab
