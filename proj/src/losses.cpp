#include "boxlab/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boxlab {

std::string coeff_mode_name(CoeffMode mode) {
  switch (mode) {
    case CoeffMode::None: return "none";
    case CoeffMode::PosOnly: return "pos";
    case CoeffMode::NegOnly: return "neg";
    case CoeffMode::Both: return "both";
  }
  throw std::logic_error("unreachable coeff mode");
}

CoeffMode parse_coeff_mode(const std::string& name) {
  if (name == "none") return CoeffMode::None;
  if (name == "pos") return CoeffMode::PosOnly;
  if (name == "neg") return CoeffMode::NegOnly;
  if (name == "both") return CoeffMode::Both;
  throw std::invalid_argument("unknown coeff mode: " + name);
}

double softmax_ce(std::span<const double> logits, std::size_t label) {
  if (logits.size() < 2) throw std::invalid_argument("need at least 2 logits");
  if (label >= logits.size()) throw std::invalid_argument("label out of range");
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - m);
  return std::log(sum) - (logits[label] - m);
}

std::vector<double> softmax_ce_grad(std::span<const double> logits,
                                    std::size_t label) {
  if (logits.size() < 2) throw std::invalid_argument("need at least 2 logits");
  if (label >= logits.size()) throw std::invalid_argument("label out of range");
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  std::vector<double> grad(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    grad[i] = std::exp(logits[i] - m);
    sum += grad[i];
  }
  for (std::size_t i = 0; i < logits.size(); ++i) {
    grad[i] /= sum;
    if (i == label) grad[i] -= 1.0;
  }
  return grad;
}

double iou_coefficient(SampleKind kind, double iou_value,
                       const CoeffConfig& cfg) {
  if (iou_value < 0.0 || iou_value > 1.0)
    throw std::invalid_argument("iou must lie in [0, 1]");
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma))
    throw std::invalid_argument("gamma must be finite and positive");
  switch (kind) {
    case SampleKind::Positive:
      return 1.0 - std::pow(1.0 - iou_value, cfg.gamma);
    case SampleKind::Negative:
      return cfg.negative_branch == NegativeBranch::OneMinusIoUPow
                 ? std::pow(1.0 - iou_value, cfg.gamma)
                 : std::pow(iou_value, cfg.gamma);
  }
  throw std::logic_error("unreachable sample kind");
}

double applied_coefficient(SampleKind kind, double iou_value,
                           const LossConfig& cfg) {
  const bool covered =
      cfg.coeff_mode == CoeffMode::Both ||
      (cfg.coeff_mode == CoeffMode::PosOnly && kind == SampleKind::Positive) ||
      (cfg.coeff_mode == CoeffMode::NegOnly && kind == SampleKind::Negative);
  return covered ? iou_coefficient(kind, iou_value, cfg.coeff) : 1.0;
}

double weighted_cls_loss(const ClassificationSample& sample,
                         const LossConfig& cfg) {
  return applied_coefficient(sample.kind, sample.coeff_iou, cfg) *
         softmax_ce(sample.logits, sample.label);
}

Offset4 encode_offsets(const Box& anchor, const Box& target) {
  return {(target.cx - anchor.cx) / anchor.w, (target.cy - anchor.cy) / anchor.h,
          std::log(target.w / anchor.w), std::log(target.h / anchor.h)};
}

Box decode_offsets(const Box& anchor, const Offset4& offsets) {
  return Box(anchor.cx + offsets.dx * anchor.w,
             anchor.cy + offsets.dy * anchor.h,
             anchor.w * std::exp(offsets.dw), anchor.h * std::exp(offsets.dh));
}

double l1_loc_loss(const Offset4& pred, const Offset4& target) {
  return std::abs(pred.dx - target.dx) + std::abs(pred.dy - target.dy) +
         std::abs(pred.dw - target.dw) + std::abs(pred.dh - target.dh);
}

Offset4 l1_loc_grad(const Offset4& pred, const Offset4& target) {
  const auto sgn = [](double d) { return d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0); };
  return {sgn(pred.dx - target.dx), sgn(pred.dy - target.dy),
          sgn(pred.dw - target.dw), sgn(pred.dh - target.dh)};
}

TotalLoss total_loss(double cls_sum, double loc_sum, std::size_t n_positive,
                     const LossConfig& cfg) {
  if (n_positive == 0) return {0.0, true};
  return {(cls_sum + cfg.alpha * loc_sum) / static_cast<double>(n_positive),
          false};
}

}  // namespace boxlab
