#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "boxlab/geometry.hpp"

namespace boxlab {

enum class SampleKind { Positive, Negative };

// Which branch the negative-sample coefficient uses. OneMinusIoUPow is the
// default: it falls as overlap rises, so zero-overlap negatives carry the
// largest weight. IoUPowAsPrinted keeps the opposite (rising) variant
// selectable for audits.
enum class NegativeBranch { OneMinusIoUPow, IoUPowAsPrinted };

struct CoeffConfig {
  double gamma = 2.0;
  NegativeBranch negative_branch = NegativeBranch::OneMinusIoUPow;
};

enum class CoeffMode { None, PosOnly, NegOnly, Both };

std::string coeff_mode_name(CoeffMode mode);
CoeffMode parse_coeff_mode(const std::string& name);

struct LossConfig {
  double alpha = 1.0;  // classification/localization weight
  PenaltyKind loc_kind = PenaltyKind::MIoULoss;
  CoeffMode coeff_mode = CoeffMode::None;
  CoeffConfig coeff{};
  std::size_t mining_ratio = 3;  // negatives per positive
};

// Class logits plus the constants that drive the overlap coefficient.
// Background is class index 0; negatives carry the background label.
struct ClassificationSample {
  std::vector<double> logits;
  std::size_t label = 0;
  SampleKind kind = SampleKind::Negative;
  double coeff_iou = 0.0;  // treated as a constant, never differentiated
};

// -log softmax(logits)[label], max-shifted for stability.
double softmax_ce(std::span<const double> logits, std::size_t label);

// Gradient of softmax_ce with respect to each logit: softmax - onehot.
std::vector<double> softmax_ce_grad(std::span<const double> logits,
                                    std::size_t label);

// The overlap coefficient f:
//   positive: 1 - (1 - iou)^gamma   (rises with overlap)
//   negative: (1 - iou)^gamma       (falls with overlap; default branch)
// Always in [0, 1].
double iou_coefficient(SampleKind kind, double iou_value,
                       const CoeffConfig& cfg);

// Coefficient actually applied under cfg.coeff_mode; 1 when the mode does
// not cover the sample's kind.
double applied_coefficient(SampleKind kind, double iou_value,
                           const LossConfig& cfg);

// f(iou) * CE. The coefficient scales the loss and its logit gradient but
// is itself a constant: nothing propagates back through coeff_iou.
double weighted_cls_loss(const ClassificationSample& sample,
                         const LossConfig& cfg);

// Anchor-relative offsets: center deltas over anchor extents, log size
// ratios.
struct Offset4 {
  double dx = 0.0, dy = 0.0, dw = 0.0, dh = 0.0;

  bool operator==(const Offset4& other) const = default;
};

Offset4 encode_offsets(const Box& anchor, const Box& target);
Box decode_offsets(const Box& anchor, const Offset4& offsets);

// Sum of absolute componentwise differences.
double l1_loc_loss(const Offset4& pred, const Offset4& target);

// Subgradient of l1_loc_loss with respect to pred (sign of differences,
// zero at equality).
Offset4 l1_loc_grad(const Offset4& pred, const Offset4& target);

struct TotalLoss {
  double value = 0.0;
  bool no_positives = false;  // image had no matched anchors
};

// (cls_sum + alpha * loc_sum) / n_positive; zero with the flag set when
// n_positive is zero.
TotalLoss total_loss(double cls_sum, double loc_sum, std::size_t n_positive,
                     const LossConfig& cfg);

}  // namespace boxlab
