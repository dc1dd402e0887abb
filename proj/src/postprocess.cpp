#include "boxlab/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace boxlab {

namespace {

std::vector<std::size_t> score_order(std::span<const Detection> dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
    return a < b;
  });
  return order;
}

constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);

// Greedy matching at one threshold: detections in global score order each
// take the unmatched ground truth of their image with the highest overlap
// at or above the threshold (ties to the lower gt index). Returns the gt
// index per detection, kUnmatched for false positives.
std::vector<std::size_t> match_detections(std::span<const Detection> dets,
                                          std::span<const GroundTruth> gts,
                                          const std::vector<std::size_t>& order,
                                          double threshold) {
  std::vector<std::size_t> matched_gt(dets.size(), kUnmatched);
  std::vector<bool> taken(gts.size(), false);
  for (std::size_t d : order) {
    std::size_t best_g = kUnmatched;
    double best_v = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g] || gts[g].image_id != dets[d].image_id) continue;
      const double v = iou(dets[d].box, gts[g].box);
      if (v >= threshold && v > best_v) {
        best_v = v;
        best_g = g;
      }
    }
    if (best_g != kUnmatched) {
      taken[best_g] = true;
      matched_gt[d] = best_g;
    }
  }
  return matched_gt;
}

// All-points AP from true/false-positive flags in score order: integrate
// the backward precision envelope over the recall steps.
double ap_from_flags(const std::vector<bool>& tp, std::size_t n_gt) {
  const std::size_t n = tp.size();
  std::vector<double> precision(n), recall(n);
  std::size_t tp_cum = 0, fp_cum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tp[i] ? ++tp_cum : ++fp_cum;
    precision[i] = static_cast<double>(tp_cum) /
                   static_cast<double>(tp_cum + fp_cum);
    recall[i] = static_cast<double>(tp_cum) / static_cast<double>(n_gt);
  }
  double ap = 0.0, envelope = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    envelope = std::max(envelope, precision[i]);
    const double prev = i > 0 ? recall[i - 1] : 0.0;
    ap += (recall[i] - prev) * envelope;
  }
  return ap;
}

}  // namespace

std::vector<Detection> nms(std::span<const Detection> dets,
                           double iou_threshold) {
  const std::vector<std::size_t> order = score_order(dets);
  std::vector<bool> suppressed(dets.size(), false);
  std::vector<Detection> kept;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t a = order[i];
    if (suppressed[a]) continue;
    kept.push_back(dets[a]);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const std::size_t b = order[j];
      if (suppressed[b] || dets[b].image_id != dets[a].image_id) continue;
      if (iou(dets[a].box, dets[b].box) > iou_threshold) suppressed[b] = true;
    }
  }
  return kept;
}

std::vector<double> default_ap_thresholds() {
  std::vector<double> out;
  for (int i = 0; i < 10; ++i) out.push_back(0.5 + 0.05 * i);
  return out;
}

ApReport evaluate_ap(std::span<const Detection> dets,
                     std::span<const GroundTruth> gts,
                     std::span<const double> thresholds) {
  if (gts.empty()) throw std::invalid_argument("no ground truths to evaluate");
  std::vector<double> thr(thresholds.begin(), thresholds.end());
  if (thr.empty()) thr = default_ap_thresholds();

  const std::vector<std::size_t> order = score_order(dets);

  // width bins: overall plus S/M/L keyed on ground-truth width
  struct Bin {
    double lo, hi;
    std::vector<bool> in_bin;
    std::size_t n_gt = 0;
    double ap_sum = 0.0;
  };
  std::vector<Bin> bins = {{0.0, std::numeric_limits<double>::infinity(), {}, 0, 0.0},
                           {0.0, 32.0, {}, 0, 0.0},
                           {32.0, 96.0, {}, 0, 0.0},
                           {96.0, std::numeric_limits<double>::infinity(), {}, 0, 0.0}};
  for (auto& bin : bins) {
    bin.in_bin.resize(gts.size());
    for (std::size_t g = 0; g < gts.size(); ++g) {
      bin.in_bin[g] = gts[g].box.w >= bin.lo && gts[g].box.w < bin.hi;
      if (bin.in_bin[g]) ++bin.n_gt;
    }
  }

  ApReport report;
  for (double t : thr) {
    const std::vector<std::size_t> matched = match_detections(dets, gts, order, t);
    double overall = 0.0;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      Bin& bin = bins[b];
      if (bin.n_gt == 0) continue;
      std::vector<bool> tp;
      for (std::size_t d : order) {
        const std::size_t g = matched[d];
        if (g != kUnmatched && !bin.in_bin[g]) continue;  // out-of-bin match
        tp.push_back(g != kUnmatched);
      }
      const double ap = ap_from_flags(tp, bin.n_gt);
      bin.ap_sum += ap;
      if (b == 0) overall = ap;
    }
    report.per_threshold.emplace_back(t, overall);
    if (std::abs(t - 0.75) < 1e-9) report.ap75 = overall;
  }

  const double n = static_cast<double>(thr.size());
  report.ap = bins[0].ap_sum / n;
  if (bins[1].n_gt > 0) report.ap_s = bins[1].ap_sum / n;
  if (bins[2].n_gt > 0) report.ap_m = bins[2].ap_sum / n;
  if (bins[3].n_gt > 0) report.ap_l = bins[3].ap_sum / n;
  return report;
}

}  // namespace boxlab
