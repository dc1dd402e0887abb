#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "boxlab/assignment.hpp"
#include "boxlab/geometry.hpp"
#include "boxlab/losses.hpp"
#include "boxlab/postprocess.hpp"

namespace boxlab {

// ---- moving-vector direction sweep ----

struct SweepConfig {
  double a = 1.0;       // side of both boxes
  double dr = 0.1;      // step length
  std::size_t n_theta = 360;  // at least 4
};

struct SweepPoint {
  double theta = 0.0;  // radians
  double r = 0.0;
};

struct SweepProfile {
  std::vector<SweepPoint> points;
  double argmin_theta = 0.0;
  double argmin_r = 0.0;
};

// Normalized-distance ratio of two equal squares after the predicted box,
// starting one side-length off in both axes, moves by dr along theta:
//   [(a + dr cos t)^2 + (a + dr sin t)^2] / [(2a + dr cos t)^2 + (2a + dr sin t)^2]
// evaluated as printed, with no geometric clamping, over n_theta uniform
// angles. The profile is monotone in cos t + sin t, so its minimum sits at
// 225 degrees.
SweepProfile direction_sweep(const SweepConfig& cfg);

// Same sweep but with the ratio computed from actual box geometry (true
// enclosing box after the move), for comparison when dr is large enough
// that the closed form above stops being a valid diagonal.
SweepProfile direction_sweep_geometric(const SweepConfig& cfg);

// ---- gradient direction analysis ----

enum class CenterPenalty { DIoU, MIoU };

// Angle in [0, pi] between the negated center gradient of the chosen
// center-distance term (the 1-iou part excluded) and the straight line
// from pred center to target center. Zero means steepest descent walks the
// centers together along the shortest path. Rejects coincident centers.
double gradient_alignment_angle(CenterPenalty kind, const Box& pred,
                                const Box& target);

// ---- gradient-descent regression benchmark ----

struct BenchmarkConfig {
  std::vector<PenaltyKind> kinds = {PenaltyKind::IoULoss, PenaltyKind::GIoULoss,
                                    PenaltyKind::DIoULoss,
                                    PenaltyKind::MIoULoss};
  std::vector<double> center_offsets = {-3.0, -1.5, 0.0, 1.5, 3.0};  // per axis
  std::vector<double> scales = {0.5, 1.0, 2.0};
  std::vector<double> aspects = {0.5, 1.0, 2.0};
  Box target{0.0, 0.0, 1.0, 1.0};
  double learning_rate = 0.1;
  std::size_t max_steps = 500;
  double iou_tau = 0.9;       // stop when IoU reaches this
  double center_eps = 0.0;    // or when center distance falls below (0 = off)
  bool center_only = false;   // update cx, cy only
  bool penalty_term_only = false;  // descend on the center-distance term alone
  bool record_trajectories = false;
  std::uint64_t seed = 0;  // carried into reports; the grid itself is fixed
};

struct RunRecord {
  PenaltyKind kind = PenaltyKind::IoULoss;
  Box start{0.0, 0.0, 1.0, 1.0};
  double initial_iou = 0.0;
  double final_iou = 0.0;
  std::size_t steps = 0;
  bool reached_iou = false;
  bool reached_center = false;
  bool diverged = false;
  std::vector<Box> trajectory;           // when recording is on
  std::vector<double> center_distances;  // per executed step
};

struct BenchmarkReport {
  std::vector<RunRecord> runs;
};

// Plain gradient descent on the predicted box's four parameters from every
// grid start, per penalty kind. Runs never abort the batch: non-finite
// parameters or collapsed extents mark the run diverged.
BenchmarkReport run_regression_benchmark(const BenchmarkConfig& cfg);

// ---- toy detection-head experiment ----

// A single synthetic scene: ground-truth boxes plus a regular grid of
// anchors, each anchor owning free class logits and box offsets (no shared
// features). Anchors that overlap an object start with their offsets
// already regressed onto it and with object logits that grow with that
// overlap, standing in for a localization head that works and for
// object-like appearance near objects.
struct ToyConfig {
  std::vector<Box> gts = {Box(2.0, 2.0, 2.0, 2.0), Box(6.0, 5.0, 2.2, 1.8),
                          Box(3.5, 6.5, 1.8, 2.2)};
  std::size_t grid_nx = 20, grid_ny = 20;
  double extent = 8.0;  // anchors tile [0, extent]^2
  double anchor_w = 1.4, anchor_h = 1.4;
  double bg_logit_mean = 0.0, bg_logit_stddev = 1.0;
  double obj_logit_base = 1.0;   // object logit mean at zero overlap
  double obj_logit_slope = 8.0;  // extra mean per unit anchor overlap
  double obj_logit_stddev = 1.0;
  double regressed_min_iou = 0.15;   // anchors above this start regressed
  double regressed_offset_noise = 0.12;
  double far_offset_noise = 0.05;
  double learning_rate = 0.6;
  std::size_t epochs = 200;
  double pos_threshold = 0.5;
  double nms_threshold = 0.5;
  std::uint64_t seed = 1;
  LossConfig loss{};
};

struct BucketStat {
  std::size_t count = 0;
  std::size_t misclassified = 0;
  double rate = 0.0;
};

struct ToyReport {
  // negatives bucketed by the IoU of their decoded box: [0,0.1) / [0.1,0.5) / [0.5,1]
  BucketStat negative_low, negative_mid, negative_high;
  double positive_score_iou_correlation = 0.0;
  std::optional<ApReport> ap;  // decoded detections after NMS vs the scene
  double final_loss = 0.0;
  std::size_t n_positive = 0;
  std::size_t n_anchors = 0;
};

// Joint gradient descent on all per-anchor logits and offsets under the
// combined objective: per epoch the decoded boxes set the coefficient
// overlaps (constants), negatives are mined against the weighted losses at
// the configured ratio, and only the selected samples receive gradients.
ToyReport run_toy_experiment(const ToyConfig& cfg);

}  // namespace boxlab
