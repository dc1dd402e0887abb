#pragma once

#include <string>

namespace boxlab {

// Floor applied to every denominator (union area, squared diagonal,
// squared mean extents) so near-degenerate pairs divide cleanly without
// biasing values at ordinary scales. Identical across all penalty kinds.
inline constexpr double kDenomEpsilon = 1e-12;

// Axis-aligned box in center/size form. Construction rejects non-finite
// values and non-positive extents.
struct Box {
  Box(double cx, double cy, double w, double h);

  double cx, cy, w, h;

  double x1() const { return cx - w / 2.0; }
  double y1() const { return cy - h / 2.0; }
  double x2() const { return cx + w / 2.0; }
  double y2() const { return cy + h / 2.0; }
  double area() const { return w * h; }

  bool operator==(const Box& other) const = default;
};

// Gradient of a scalar penalty with respect to a box's four parameters.
struct Grad4 {
  double d_cx = 0.0, d_cy = 0.0, d_w = 0.0, d_h = 0.0;

  bool operator==(const Grad4& other) const = default;
};

enum class PenaltyKind { L1Norm, IoULoss, GIoULoss, DIoULoss, MIoULoss };

std::string penalty_kind_name(PenaltyKind kind);
PenaltyKind parse_penalty_kind(const std::string& name);

// Intersection over union. Symmetric, in [0, 1], 0 for disjoint boxes.
double iou(const Box& a, const Box& b);

// Generalized IoU: iou minus the fraction of the enclosing box not covered
// by the union. In (-1, 1].
double giou(const Box& a, const Box& b);

// Squared diagonal of the smallest axis-aligned box covering both.
double enclosing_diagonal_sq(const Box& a, const Box& b);

// Squared center distance over the squared enclosing diagonal. In [0, 1).
double r_diou(const Box& pred, const Box& target);

// Per-axis squared center offsets normalized by the mean width W and mean
// height H of the two boxes. Invariant under uniform rescaling of both
// boxes.
double r_miou(const Box& pred, const Box& target);

// r_miou with the normalizers pinned to explicit values. The normalizers
// are constants during differentiation, so finite-difference checks must
// hold them at their unperturbed values; this is the hook for that.
double r_miou_frozen(const Box& pred, const Box& target, double mean_w,
                     double mean_h);

// Localization penalty:
//   IoULoss  = 1 - iou
//   GIoULoss = 1 - giou
//   DIoULoss = 1 - iou + r_diou
//   MIoULoss = 1 - iou + r_miou
// L1Norm operates on encoded offsets, not boxes, and is rejected here.
double loc_penalty(PenaltyKind kind, const Box& pred, const Box& target);

// Analytic gradient of loc_penalty with respect to pred. The normalizers
// in the MIoU term contribute no derivative (their gradient flag is off),
// so d_w/d_h carry only the 1-iou contribution for that kind. Where an
// edge of pred exactly coincides with an edge of target the one-sided
// derivative that tracks pred's edge is returned.
Grad4 loc_penalty_grad(PenaltyKind kind, const Box& pred, const Box& target);

// Gradients of the center-distance terms alone (no 1-iou part).
Grad4 r_diou_grad(const Box& pred, const Box& target);
Grad4 r_miou_grad(const Box& pred, const Box& target);

}  // namespace boxlab
