#include "boxlab/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "boxlab/rng.hpp"

namespace boxlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_sweep(const SweepConfig& cfg) {
  if (!(cfg.a > 0.0)) throw std::invalid_argument("sweep: a must be positive");
  if (!(cfg.dr > 0.0)) throw std::invalid_argument("sweep: dr must be positive");
  if (cfg.n_theta < 4)
    throw std::invalid_argument("sweep: need at least 4 angles");
}

template <typename F>
SweepProfile sweep_with(const SweepConfig& cfg, F&& ratio) {
  SweepProfile profile;
  profile.points.reserve(cfg.n_theta);
  std::size_t best = 0;
  for (std::size_t i = 0; i < cfg.n_theta; ++i) {
    const double theta =
        2.0 * kPi * static_cast<double>(i) / static_cast<double>(cfg.n_theta);
    const double r = ratio(theta);
    profile.points.push_back({theta, r});
    if (r < profile.points[best].r) best = i;
  }
  profile.argmin_theta = profile.points[best].theta;
  profile.argmin_r = profile.points[best].r;
  return profile;
}

}  // namespace

SweepProfile direction_sweep(const SweepConfig& cfg) {
  validate_sweep(cfg);
  return sweep_with(cfg, [&](double theta) {
    const double nx = cfg.a + cfg.dr * std::cos(theta);
    const double ny = cfg.a + cfg.dr * std::sin(theta);
    const double dx = 2.0 * cfg.a + cfg.dr * std::cos(theta);
    const double dy = 2.0 * cfg.a + cfg.dr * std::sin(theta);
    return (nx * nx + ny * ny) / (dx * dx + dy * dy);
  });
}

SweepProfile direction_sweep_geometric(const SweepConfig& cfg) {
  validate_sweep(cfg);
  const Box target(0.0, 0.0, cfg.a, cfg.a);
  return sweep_with(cfg, [&](double theta) {
    const Box pred(cfg.a + cfg.dr * std::cos(theta),
                   cfg.a + cfg.dr * std::sin(theta), cfg.a, cfg.a);
    return r_diou(pred, target);
  });
}

double gradient_alignment_angle(CenterPenalty kind, const Box& pred,
                                const Box& target) {
  const double dir_x = target.cx - pred.cx;
  const double dir_y = target.cy - pred.cy;
  if (dir_x == 0.0 && dir_y == 0.0)
    throw std::invalid_argument("coincident centers have no direction");

  const Grad4 g = kind == CenterPenalty::DIoU ? r_diou_grad(pred, target)
                                              : r_miou_grad(pred, target);
  const double gx = -g.d_cx;
  const double gy = -g.d_cy;
  // atan2 of cross/dot keeps near-parallel angles accurate to rounding,
  // where acos of the normalized dot would lose ~1e-8
  const double cross = gx * dir_y - gy * dir_x;
  const double dot = gx * dir_x + gy * dir_y;
  return std::atan2(std::abs(cross), dot);
}

namespace {

bool usable_params(const double p[4]) {
  for (int i = 0; i < 4; ++i)
    if (!std::isfinite(p[i])) return false;
  return p[2] > 1e-9 && p[3] > 1e-9;
}

RunRecord run_descent(PenaltyKind kind, const Box& start,
                      const BenchmarkConfig& cfg) {
  RunRecord rec;
  rec.kind = kind;
  rec.start = start;
  rec.initial_iou = iou(start, cfg.target);

  double p[4] = {start.cx, start.cy, start.w, start.h};
  for (std::size_t step = 0;; ++step) {
    if (!usable_params(p)) {
      rec.diverged = true;
      rec.steps = step;
      break;
    }
    const Box current(p[0], p[1], p[2], p[3]);
    const double v = iou(current, cfg.target);
    const double dx = current.cx - cfg.target.cx;
    const double dy = current.cy - cfg.target.cy;
    const double dist = std::sqrt(dx * dx + dy * dy);
    rec.final_iou = v;
    rec.center_distances.push_back(dist);
    if (cfg.record_trajectories) rec.trajectory.push_back(current);

    if (v >= cfg.iou_tau) {
      rec.reached_iou = true;
      rec.steps = step;
      break;
    }
    if (cfg.center_eps > 0.0 && dist <= cfg.center_eps) {
      rec.reached_center = true;
      rec.steps = step;
      break;
    }
    if (step == cfg.max_steps) {
      rec.steps = step;
      break;
    }

    Grad4 g;
    if (cfg.penalty_term_only) {
      g = kind == PenaltyKind::DIoULoss ? r_diou_grad(current, cfg.target)
                                        : r_miou_grad(current, cfg.target);
    } else {
      g = loc_penalty_grad(kind, current, cfg.target);
    }
    p[0] -= cfg.learning_rate * g.d_cx;
    p[1] -= cfg.learning_rate * g.d_cy;
    if (!cfg.center_only) {
      p[2] -= cfg.learning_rate * g.d_w;
      p[3] -= cfg.learning_rate * g.d_h;
    }
  }
  return rec;
}

}  // namespace

BenchmarkReport run_regression_benchmark(const BenchmarkConfig& cfg) {
  if (cfg.kinds.empty()) throw std::invalid_argument("benchmark: no kinds");
  if (cfg.center_offsets.empty() || cfg.scales.empty() || cfg.aspects.empty())
    throw std::invalid_argument("benchmark: empty start grid");
  if (!(cfg.learning_rate > 0.0))
    throw std::invalid_argument("benchmark: learning rate must be positive");
  for (PenaltyKind kind : cfg.kinds) {
    if (kind == PenaltyKind::L1Norm)
      throw std::invalid_argument("benchmark: l1 operates on offsets");
    if (cfg.penalty_term_only && kind != PenaltyKind::DIoULoss &&
        kind != PenaltyKind::MIoULoss)
      throw std::invalid_argument(
          "benchmark: penalty-term-only descent needs a center-distance term");
  }

  BenchmarkReport report;
  for (PenaltyKind kind : cfg.kinds)
    for (double ox : cfg.center_offsets)
      for (double oy : cfg.center_offsets)
        for (double scale : cfg.scales)
          for (double aspect : cfg.aspects) {
            const double w = scale * std::sqrt(aspect);
            const double h = scale / std::sqrt(aspect);
            const Box start(cfg.target.cx + ox, cfg.target.cy + oy, w, h);
            report.runs.push_back(run_descent(kind, start, cfg));
          }
  return report;
}

namespace {

struct ToyScene {
  std::vector<Box> anchors;
  MatchResult match;
  std::vector<std::vector<double>> logits;  // [anchor][class], 2 classes
  std::vector<Offset4> offsets;
};

ToyScene build_scene(const ToyConfig& cfg) {
  if (cfg.gts.empty()) throw std::invalid_argument("toy: need ground truths");
  if (cfg.grid_nx == 0 || cfg.grid_ny == 0)
    throw std::invalid_argument("toy: need anchors");
  if (!(cfg.extent > 0.0) || !(cfg.anchor_w > 0.0) || !(cfg.anchor_h > 0.0))
    throw std::invalid_argument("toy: bad scene extents");
  if (!(cfg.learning_rate > 0.0))
    throw std::invalid_argument("toy: learning rate must be positive");

  ToyScene scene;
  for (std::size_t j = 0; j < cfg.grid_ny; ++j)
    for (std::size_t i = 0; i < cfg.grid_nx; ++i)
      scene.anchors.emplace_back(
          (static_cast<double>(i) + 0.5) * cfg.extent /
              static_cast<double>(cfg.grid_nx),
          (static_cast<double>(j) + 0.5) * cfg.extent /
              static_cast<double>(cfg.grid_ny),
          cfg.anchor_w, cfg.anchor_h);

  scene.match = match_anchors(scene.anchors, cfg.gts, cfg.pos_threshold);

  Rng rng(cfg.seed);
  const std::size_t n = scene.anchors.size();
  scene.logits.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const double overlap = scene.match.anchors[a].best_iou;
    scene.logits[a] = {rng.normal(cfg.bg_logit_mean, cfg.bg_logit_stddev),
                       rng.normal(cfg.obj_logit_base +
                                      cfg.obj_logit_slope * overlap,
                                  cfg.obj_logit_stddev)};
  }
  scene.offsets.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const AnchorRecord& rec = scene.match.anchors[a];
    if (rec.best_iou >= cfg.regressed_min_iou) {
      const Offset4 enc =
          encode_offsets(scene.anchors[a], cfg.gts[rec.target_index]);
      scene.offsets[a] = {enc.dx + rng.normal(0.0, cfg.regressed_offset_noise),
                          enc.dy + rng.normal(0.0, cfg.regressed_offset_noise),
                          enc.dw + rng.normal(0.0, cfg.regressed_offset_noise),
                          enc.dh + rng.normal(0.0, cfg.regressed_offset_noise)};
    } else {
      scene.offsets[a] = {rng.normal(0.0, cfg.far_offset_noise),
                          rng.normal(0.0, cfg.far_offset_noise),
                          rng.normal(0.0, cfg.far_offset_noise),
                          rng.normal(0.0, cfg.far_offset_noise)};
    }
  }
  return scene;
}

double object_probability(const std::vector<double>& logits) {
  return 1.0 / (1.0 + std::exp(logits[0] - logits[1]));
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

ToyReport run_toy_experiment(const ToyConfig& cfg) {
  ToyScene scene = build_scene(cfg);
  const std::size_t n = scene.anchors.size();
  const std::size_t npos = scene.match.n_positive;

  ToyReport report;
  report.n_anchors = n;
  report.n_positive = npos;

  std::vector<Box> decoded;
  std::vector<double> coeff_iou(n), weighted(n);
  std::vector<std::size_t> mined;

  // epochs + 1 evaluation passes; the last one only reports
  for (std::size_t epoch = 0;; ++epoch) {
    decoded.clear();
    for (std::size_t a = 0; a < n; ++a)
      decoded.push_back(decode_offsets(scene.anchors[a], scene.offsets[a]));

    for (std::size_t a = 0; a < n; ++a) {
      const AnchorRecord& rec = scene.match.anchors[a];
      if (rec.kind == MatchKind::Positive) {
        coeff_iou[a] = iou(decoded[a], cfg.gts[rec.target_index]);
      } else {
        double best = 0.0;
        for (const Box& gt : cfg.gts) best = std::max(best, iou(decoded[a], gt));
        coeff_iou[a] = best;
      }
      const SampleKind kind = rec.kind == MatchKind::Positive
                                  ? SampleKind::Positive
                                  : SampleKind::Negative;
      const std::size_t label = rec.kind == MatchKind::Positive ? 1 : 0;
      weighted[a] = applied_coefficient(kind, coeff_iou[a], cfg.loss) *
                    softmax_ce(scene.logits[a], label);
    }
    mined = mine_hard_negatives(weighted, scene.match, cfg.loss.mining_ratio);

    double cls_sum = 0.0, loc_sum = 0.0;
    std::vector<bool> selected(n, false);
    for (std::size_t a : mined) selected[a] = true;
    for (std::size_t a = 0; a < n; ++a) {
      const AnchorRecord& rec = scene.match.anchors[a];
      if (rec.kind == MatchKind::Positive) {
        selected[a] = true;
        const Box& gt = cfg.gts[rec.target_index];
        loc_sum += cfg.loss.loc_kind == PenaltyKind::L1Norm
                       ? l1_loc_loss(scene.offsets[a],
                                     encode_offsets(scene.anchors[a], gt))
                       : loc_penalty(cfg.loss.loc_kind, decoded[a], gt);
      }
      if (selected[a]) cls_sum += weighted[a];
    }
    report.final_loss = total_loss(cls_sum, loc_sum, npos, cfg.loss).value;

    if (epoch == cfg.epochs) break;

    const double scale =
        cfg.learning_rate / static_cast<double>(std::max<std::size_t>(npos, 1));
    for (std::size_t a = 0; a < n; ++a) {
      const AnchorRecord& rec = scene.match.anchors[a];
      const bool positive = rec.kind == MatchKind::Positive;
      if (selected[a]) {
        const std::size_t label = positive ? 1 : 0;
        const SampleKind kind =
            positive ? SampleKind::Positive : SampleKind::Negative;
        const double c = applied_coefficient(kind, coeff_iou[a], cfg.loss);
        const std::vector<double> g = softmax_ce_grad(scene.logits[a], label);
        for (std::size_t k = 0; k < g.size(); ++k)
          scene.logits[a][k] -= scale * c * g[k];
      }
      if (positive) {
        const Box& gt = cfg.gts[rec.target_index];
        Offset4 g;
        if (cfg.loss.loc_kind == PenaltyKind::L1Norm) {
          g = l1_loc_grad(scene.offsets[a],
                          encode_offsets(scene.anchors[a], gt));
        } else {
          const Grad4 gb = loc_penalty_grad(cfg.loss.loc_kind, decoded[a], gt);
          // chain through the decode map
          g = {gb.d_cx * scene.anchors[a].w, gb.d_cy * scene.anchors[a].h,
               gb.d_w * decoded[a].w, gb.d_h * decoded[a].h};
        }
        scene.offsets[a].dx -= scale * cfg.loss.alpha * g.dx;
        scene.offsets[a].dy -= scale * cfg.loss.alpha * g.dy;
        scene.offsets[a].dw -= scale * cfg.loss.alpha * g.dw;
        scene.offsets[a].dh -= scale * cfg.loss.alpha * g.dh;
      }
    }
  }

  // bucketed negative misclassification, positive correlation, scene AP
  const auto bucket_of = [&](double v) -> BucketStat& {
    if (v < 0.1) return report.negative_low;
    if (v < 0.5) return report.negative_mid;
    return report.negative_high;
  };
  std::vector<double> pos_scores, pos_ious;
  std::vector<Detection> dets;
  for (std::size_t a = 0; a < n; ++a) {
    const AnchorRecord& rec = scene.match.anchors[a];
    const double score = object_probability(scene.logits[a]);
    dets.push_back({decoded[a], std::min(std::max(score, 0.0), 1.0), "0"});
    if (rec.kind == MatchKind::Positive) {
      pos_scores.push_back(score);
      pos_ious.push_back(coeff_iou[a]);
    } else {
      BucketStat& bucket = bucket_of(coeff_iou[a]);
      ++bucket.count;
      if (scene.logits[a][1] > scene.logits[a][0]) ++bucket.misclassified;
    }
  }
  for (BucketStat* b :
       {&report.negative_low, &report.negative_mid, &report.negative_high})
    b->rate = b->count > 0 ? static_cast<double>(b->misclassified) /
                                 static_cast<double>(b->count)
                           : 0.0;
  report.positive_score_iou_correlation = pearson(pos_ious, pos_scores);

  std::vector<GroundTruth> gts;
  for (const Box& gt : cfg.gts) gts.push_back({gt, "0"});
  report.ap = evaluate_ap(nms(dets, cfg.nms_threshold), gts);
  return report;
}

}  // namespace boxlab
