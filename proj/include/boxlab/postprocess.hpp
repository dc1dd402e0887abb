#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boxlab/geometry.hpp"

namespace boxlab {

struct Detection {
  Box box;
  double score = 0.0;  // in [0, 1]
  std::string image_id;
};

struct GroundTruth {
  Box box;
  std::string image_id;
};

// Greedy suppression: keep the highest-score detection, drop the rest of
// the same image whose IoU with it exceeds the threshold, repeat. Score
// ties break toward the lower input index. Output is sorted by descending
// score.
std::vector<Detection> nms(std::span<const Detection> dets,
                           double iou_threshold = 0.5);

struct ApReport {
  double ap = 0.0;    // mean over the threshold list
  double ap75 = 0.0;  // at threshold 0.75 (0 when 0.75 is not in the list)
  std::optional<double> ap_s;  // gt width < 32
  std::optional<double> ap_m;  // gt width in [32, 96)
  std::optional<double> ap_l;  // gt width >= 96
  std::vector<std::pair<double, double>> per_threshold;
};

// The usual 0.50:0.05:0.95 list.
std::vector<double> default_ap_thresholds();

// Average precision with greedy score-ordered matching per threshold and
// all-points (precision envelope) interpolation. Size-restricted values
// keep only the ground truths in the width bin; detections matched to an
// out-of-bin ground truth are dropped rather than counted as false
// positives. Bins with no ground truths report absent.
ApReport evaluate_ap(std::span<const Detection> dets,
                     std::span<const GroundTruth> gts,
                     std::span<const double> thresholds = {});

}  // namespace boxlab
