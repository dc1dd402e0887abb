#include "boxlab/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace boxlab {

namespace {

bool finite(double v) { return std::isfinite(v); }

// Everything the penalty family needs about a pred/target pair, computed
// once: intersection and enclosing extents plus flags telling which box's
// edge forms each boundary. Ties attribute the shared edge to pred so the
// value and gradient paths agree on the same one-sided derivative.
struct PairGeometry {
  double iw = 0.0, ih = 0.0, inter = 0.0;
  bool overlapping = false;
  double union_area = 0.0;
  double cw = 0.0, ch = 0.0;  // enclosing box extents

  // intersection boundary tracked by pred's edge
  bool ix1_pred = false, ix2_pred = false, iy1_pred = false, iy2_pred = false;
  // enclosing boundary tracked by pred's edge
  bool ex1_pred = false, ex2_pred = false, ey1_pred = false, ey2_pred = false;
};

PairGeometry pair_geometry(const Box& p, const Box& t) {
  PairGeometry g;
  const double px1 = p.x1(), px2 = p.x2(), py1 = p.y1(), py2 = p.y2();
  const double tx1 = t.x1(), tx2 = t.x2(), ty1 = t.y1(), ty2 = t.y2();

  g.ix1_pred = px1 >= tx1;
  g.ix2_pred = px2 <= tx2;
  g.iy1_pred = py1 >= ty1;
  g.iy2_pred = py2 <= ty2;

  g.iw = std::min(px2, tx2) - std::max(px1, tx1);
  g.ih = std::min(py2, ty2) - std::max(py1, ty1);
  g.overlapping = g.iw > 0.0 && g.ih > 0.0;
  g.inter = g.overlapping ? g.iw * g.ih : 0.0;
  g.union_area = p.area() + t.area() - g.inter;

  g.ex1_pred = px1 <= tx1;
  g.ex2_pred = px2 >= tx2;
  g.ey1_pred = py1 <= ty1;
  g.ey2_pred = py2 >= ty2;

  g.cw = std::max(px2, tx2) - std::min(px1, tx1);
  g.ch = std::max(py2, ty2) - std::min(py1, ty1);
  return g;
}

// d(intersection area)/d(pred params); zero when disjoint.
Grad4 inter_grad(const PairGeometry& g) {
  if (!g.overlapping) return {};
  const double dw_cx = (g.ix2_pred ? 1.0 : 0.0) - (g.ix1_pred ? 1.0 : 0.0);
  const double dw_w = ((g.ix2_pred ? 1.0 : 0.0) + (g.ix1_pred ? 1.0 : 0.0)) / 2.0;
  const double dh_cy = (g.iy2_pred ? 1.0 : 0.0) - (g.iy1_pred ? 1.0 : 0.0);
  const double dh_h = ((g.iy2_pred ? 1.0 : 0.0) + (g.iy1_pred ? 1.0 : 0.0)) / 2.0;
  return {dw_cx * g.ih, g.iw * dh_cy, dw_w * g.ih, g.iw * dh_h};
}

// d(enclosing width, height)/d(pred params).
void enclosing_grads(const PairGeometry& g, Grad4& dcw, Grad4& dch) {
  dcw.d_cx = (g.ex2_pred ? 1.0 : 0.0) - (g.ex1_pred ? 1.0 : 0.0);
  dcw.d_w = ((g.ex2_pred ? 1.0 : 0.0) + (g.ex1_pred ? 1.0 : 0.0)) / 2.0;
  dch.d_cy = (g.ey2_pred ? 1.0 : 0.0) - (g.ey1_pred ? 1.0 : 0.0);
  dch.d_h = ((g.ey2_pred ? 1.0 : 0.0) + (g.ey1_pred ? 1.0 : 0.0)) / 2.0;
}

Grad4 iou_grad(const Box& p, const PairGeometry& g) {
  const Grad4 di = inter_grad(g);
  // dU = dArea(pred) - dI; no dU term while the floor pins the denominator
  const double floored = g.union_area < kDenomEpsilon ? 0.0 : 1.0;
  const Grad4 du{floored * -di.d_cx, floored * -di.d_cy,
                 floored * (p.h - di.d_w), floored * (p.w - di.d_h)};
  const double den = std::max(g.union_area, kDenomEpsilon);
  const double inv2 = 1.0 / (den * den);
  return {(di.d_cx * den - g.inter * du.d_cx) * inv2,
          (di.d_cy * den - g.inter * du.d_cy) * inv2,
          (di.d_w * den - g.inter * du.d_w) * inv2,
          (di.d_h * den - g.inter * du.d_h) * inv2};
}

}  // namespace

Box::Box(double cx_, double cy_, double w_, double h_)
    : cx(cx_), cy(cy_), w(w_), h(h_) {
  if (!finite(cx) || !finite(cy) || !finite(w) || !finite(h))
    throw std::invalid_argument("box fields must be finite");
  if (w <= 0.0 || h <= 0.0)
    throw std::invalid_argument("box extents must be positive");
}

std::string penalty_kind_name(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::L1Norm: return "l1";
    case PenaltyKind::IoULoss: return "iou";
    case PenaltyKind::GIoULoss: return "giou";
    case PenaltyKind::DIoULoss: return "diou";
    case PenaltyKind::MIoULoss: return "miou";
  }
  throw std::logic_error("unreachable penalty kind");
}

PenaltyKind parse_penalty_kind(const std::string& name) {
  if (name == "l1") return PenaltyKind::L1Norm;
  if (name == "iou") return PenaltyKind::IoULoss;
  if (name == "giou") return PenaltyKind::GIoULoss;
  if (name == "diou") return PenaltyKind::DIoULoss;
  if (name == "miou") return PenaltyKind::MIoULoss;
  throw std::invalid_argument("unknown penalty kind: " + name);
}

double iou(const Box& a, const Box& b) {
  const PairGeometry g = pair_geometry(a, b);
  return g.inter / std::max(g.union_area, kDenomEpsilon);
}

double giou(const Box& a, const Box& b) {
  const PairGeometry g = pair_geometry(a, b);
  const double c = g.cw * g.ch;
  return g.inter / std::max(g.union_area, kDenomEpsilon) -
         (c - g.union_area) / std::max(c, kDenomEpsilon);
}

double enclosing_diagonal_sq(const Box& a, const Box& b) {
  const PairGeometry g = pair_geometry(a, b);
  return g.cw * g.cw + g.ch * g.ch;
}

double r_diou(const Box& pred, const Box& target) {
  const double dx = pred.cx - target.cx;
  const double dy = pred.cy - target.cy;
  return (dx * dx + dy * dy) /
         std::max(enclosing_diagonal_sq(pred, target), kDenomEpsilon);
}

double r_miou_frozen(const Box& pred, const Box& target, double mean_w,
                     double mean_h) {
  const double dx = pred.cx - target.cx;
  const double dy = pred.cy - target.cy;
  return dx * dx / std::max(mean_w * mean_w, kDenomEpsilon) +
         dy * dy / std::max(mean_h * mean_h, kDenomEpsilon);
}

double r_miou(const Box& pred, const Box& target) {
  return r_miou_frozen(pred, target, (pred.w + target.w) / 2.0,
                       (pred.h + target.h) / 2.0);
}

double loc_penalty(PenaltyKind kind, const Box& pred, const Box& target) {
  switch (kind) {
    case PenaltyKind::IoULoss: return 1.0 - iou(pred, target);
    case PenaltyKind::GIoULoss: return 1.0 - giou(pred, target);
    case PenaltyKind::DIoULoss: return 1.0 - iou(pred, target) + r_diou(pred, target);
    case PenaltyKind::MIoULoss: return 1.0 - iou(pred, target) + r_miou(pred, target);
    case PenaltyKind::L1Norm:
      throw std::invalid_argument(
          "l1 penalty operates on encoded offsets, not boxes");
  }
  throw std::logic_error("unreachable penalty kind");
}

Grad4 r_diou_grad(const Box& pred, const Box& target) {
  const PairGeometry g = pair_geometry(pred, target);
  Grad4 dcw, dch;
  enclosing_grads(g, dcw, dch);

  const double dx = pred.cx - target.cx;
  const double dy = pred.cy - target.cy;
  const double rho2 = dx * dx + dy * dy;
  const double lam2 = g.cw * g.cw + g.ch * g.ch;
  const double den = std::max(lam2, kDenomEpsilon);
  const double floored = lam2 < kDenomEpsilon ? 0.0 : 1.0;
  const double inv2 = 1.0 / (den * den);

  const auto d = [&](double drho2, double dlam2) {
    return (drho2 * den - rho2 * floored * dlam2) * inv2;
  };
  return {d(2.0 * dx, 2.0 * g.cw * dcw.d_cx + 2.0 * g.ch * dch.d_cx),
          d(2.0 * dy, 2.0 * g.cw * dcw.d_cy + 2.0 * g.ch * dch.d_cy),
          d(0.0, 2.0 * g.cw * dcw.d_w + 2.0 * g.ch * dch.d_w),
          d(0.0, 2.0 * g.cw * dcw.d_h + 2.0 * g.ch * dch.d_h)};
}

Grad4 r_miou_grad(const Box& pred, const Box& target) {
  const double mean_w = (pred.w + target.w) / 2.0;
  const double mean_h = (pred.h + target.h) / 2.0;
  const double dx = pred.cx - target.cx;
  const double dy = pred.cy - target.cy;
  // mean_w/mean_h are held constant, so d_w and d_h stay zero.
  return {2.0 * dx / std::max(mean_w * mean_w, kDenomEpsilon),
          2.0 * dy / std::max(mean_h * mean_h, kDenomEpsilon), 0.0, 0.0};
}

Grad4 loc_penalty_grad(PenaltyKind kind, const Box& pred, const Box& target) {
  const PairGeometry g = pair_geometry(pred, target);
  const Grad4 diou = iou_grad(pred, g);
  Grad4 out{-diou.d_cx, -diou.d_cy, -diou.d_w, -diou.d_h};

  switch (kind) {
    case PenaltyKind::IoULoss:
      return out;
    case PenaltyKind::GIoULoss: {
      Grad4 dcw, dch;
      enclosing_grads(g, dcw, dch);
      const double c = g.cw * g.ch;
      const double cden = std::max(c, kDenomEpsilon);
      const double cfloored = c < kDenomEpsilon ? 0.0 : 1.0;
      const double inv2 = 1.0 / (cden * cden);
      const Grad4 di = inter_grad(g);
      const Grad4 du{-di.d_cx, -di.d_cy, pred.h - di.d_w, pred.w - di.d_h};
      const auto add = [&](double dc, double duq) {
        // d[(C - U)/max(C, eps)]
        return ((dc - duq) * cden - (c - g.union_area) * cfloored * dc) * inv2;
      };
      out.d_cx += add(dcw.d_cx * g.ch + g.cw * dch.d_cx, du.d_cx);
      out.d_cy += add(dcw.d_cy * g.ch + g.cw * dch.d_cy, du.d_cy);
      out.d_w += add(dcw.d_w * g.ch + g.cw * dch.d_w, du.d_w);
      out.d_h += add(dcw.d_h * g.ch + g.cw * dch.d_h, du.d_h);
      return out;
    }
    case PenaltyKind::DIoULoss: {
      const Grad4 dr = r_diou_grad(pred, target);
      out.d_cx += dr.d_cx;
      out.d_cy += dr.d_cy;
      out.d_w += dr.d_w;
      out.d_h += dr.d_h;
      return out;
    }
    case PenaltyKind::MIoULoss: {
      const Grad4 dr = r_miou_grad(pred, target);
      out.d_cx += dr.d_cx;
      out.d_cy += dr.d_cy;
      return out;
    }
    case PenaltyKind::L1Norm:
      throw std::invalid_argument(
          "l1 penalty operates on encoded offsets, not boxes");
  }
  throw std::logic_error("unreachable penalty kind");
}

}  // namespace boxlab
