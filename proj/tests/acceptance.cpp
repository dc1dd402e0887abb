// Acceptance suite: one self-contained check per criterion, each printing
// a single [PASS]/[FAIL] line. Run with no arguments for the full battery
// or with an index (1-8) for one criterion. Exits nonzero on any failure.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "boxlab/assignment.hpp"
#include "boxlab/cli.hpp"
#include "boxlab/geometry.hpp"
#include "boxlab/jsonl.hpp"
#include "boxlab/losses.hpp"
#include "boxlab/postprocess.hpp"
#include "boxlab/rng.hpp"
#include "boxlab/sampling.hpp"
#include "boxlab/simulation.hpp"
#include "support/oracles.hpp"

using namespace boxlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void expect(Outcome& outcome, bool condition, const std::string& what) {
  if (!condition) {
    outcome.pass = false;
    if (!outcome.detail.empty()) outcome.detail += "; ";
    outcome.detail += what;
  }
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(10);
  ss << v;
  return ss.str();
}

// 1. Coefficient fidelity: the falling negative branch hits 0.04 at
//    overlap 0.8 with exponent 2 (decimal identity, checked to a few ulp)
//    and exactly 1 at zero overlap for every exponent.
Outcome criterion_1() {
  Outcome outcome;
  CoeffConfig cfg;  // gamma = 2
  const double at_08 = iou_coefficient(SampleKind::Negative, 0.8, cfg);
  expect(outcome, std::abs(at_08 - 0.04) <= 1e-15,
         "f(0.8) = " + fmt(at_08) + ", want 0.04");
  for (double gamma : {0.5, 1.0, 1.5, 2.0, 2.5, 5.0}) {
    cfg.gamma = gamma;
    const double at_zero = iou_coefficient(SampleKind::Negative, 0.0, cfg);
    expect(outcome, at_zero == 1.0,
           "f(0) != 1 at gamma " + fmt(gamma) + " (got " + fmt(at_zero) + ")");
  }
  return outcome;
}

// 2. Gradient oracle: analytic gradients of all four box-space penalties
//    match central differences (step 1e-6) of an independent value oracle
//    within relative error 1e-5 over 1000+ seeded pairs per kind spanning
//    disjoint, partial and contained regimes.
Outcome criterion_2() {
  Outcome outcome;
  const PenaltyKind kinds[] = {PenaltyKind::IoULoss, PenaltyKind::GIoULoss,
                               PenaltyKind::DIoULoss, PenaltyKind::MIoULoss};
  for (PenaltyKind kind : kinds) {
    Rng rng(7);
    double worst = 0.0;
    for (std::size_t i = 0; i < 1000; ++i) {
      const BoxPair pair = sample_box_pair(rng, i);
      const Grad4 analytic = loc_penalty_grad(kind, pair.pred, pair.target);
      const auto fd = oracle::fd_gradient(kind, pair.pred, pair.target, 1e-6);
      const double a[4] = {analytic.d_cx, analytic.d_cy, analytic.d_w,
                           analytic.d_h};
      for (int k = 0; k < 4; ++k)
        worst = std::max(worst, std::abs(a[k] - fd[k]) /
                                    std::max(1.0, std::abs(fd[k])));
    }
    expect(outcome, worst <= 1e-5,
           penalty_kind_name(kind) + " max rel err " + fmt(worst));
  }
  return outcome;
}

// 3. Alignment: the MIoU center term descends exactly along the
//    center-to-center line whenever the mean extents agree (1e-9 rad), and
//    the DIoU term at the worked configuration misses by 8.13 +/- 0.01 deg.
Outcome criterion_3() {
  Outcome outcome;
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const double tw = rng.uniform(0.5, 4), th = rng.uniform(0.5, 4);
    const double pw = rng.uniform(0.5, 4);
    const double ph = tw + pw - th;  // forces equal mean extents
    if (ph <= 0.05) continue;
    const Box target(0, 0, tw, th);
    const Box pred(rng.uniform(0.2, 3), rng.uniform(0.2, 3), pw, ph);
    const double angle = gradient_alignment_angle(CenterPenalty::MIoU, pred, target);
    expect(outcome, angle <= 1e-9, "miou angle " + fmt(angle));
  }
  const double diou_deg =
      gradient_alignment_angle(CenterPenalty::DIoU, Box(2, 1, 2, 2),
                               Box(0, 0, 2, 2)) *
      180.0 / 3.14159265358979323846;
  expect(outcome, std::abs(diou_deg - 8.13) <= 0.01,
         "diou angle " + fmt(diou_deg) + " deg, want 8.13 +/- 0.01");
  return outcome;
}

// 4. Direction sweep: the as-printed ratio at 3600 angles matches the
//    closed-form values at 180 and 225 deg within 1e-6, is monotone in
//    cos+sin, bottoms out at 225 +/- 0.1 deg, and the CLI report flags the
//    divergence from the externally quoted 157 deg minimum instead of
//    asserting it.
Outcome criterion_4() {
  Outcome outcome;
  const SweepProfile profile = direction_sweep({1.0, 0.1, 3600});
  expect(outcome, std::abs(profile.points[1800].r - 0.237845) <= 1e-6,
         "value at 180 deg: " + fmt(profile.points[1800].r));
  expect(outcome, std::abs(profile.points[2250].r - 0.232010) <= 1e-6,
         "value at 225 deg: " + fmt(profile.points[2250].r));

  std::vector<std::pair<double, double>> by_t;
  for (const SweepPoint& p : profile.points)
    by_t.emplace_back(std::cos(p.theta) + std::sin(p.theta), p.r);
  std::sort(by_t.begin(), by_t.end());
  bool monotone = true;
  for (std::size_t i = 1; i < by_t.size(); ++i)
    monotone = monotone && by_t[i].second >= by_t[i - 1].second - 1e-12;
  expect(outcome, monotone, "profile not monotone in cos+sin");

  const double argmin_deg = profile.argmin_theta * 180.0 / 3.14159265358979323846;
  expect(outcome, std::abs(argmin_deg - 225.0) <= 0.1,
         "argmin " + fmt(argmin_deg) + " deg");

  std::ostringstream out, err;
  const int code = run_cli({"sweep", "--a", "1", "--dr", "0.1", "--steps",
                            "3600"},
                           out, err);
  expect(outcome, code == 0, "sweep command failed");
  expect(outcome, out.str().find("157") != std::string::npos,
         "report does not flag the 157 deg discrepancy");
  expect(outcome, out.str().find("argmin: theta_deg=225,") != std::string::npos,
         "report footer lacks the 225 deg argmin");
  return outcome;
}

// 5. Benchmark convergence: with the pre-registered step size 0.1, at
//    least 95% of grid starts with initial overlap reach IoU 0.9 within
//    500 steps under both DIoU and MIoU; and center-only descent on the
//    MIoU term from equal-square starts stays on the straight line to the
//    target within 1e-9.
Outcome criterion_5() {
  Outcome outcome;
  BenchmarkConfig cfg;
  cfg.kinds = {PenaltyKind::DIoULoss, PenaltyKind::MIoULoss};
  const BenchmarkReport report = run_regression_benchmark(cfg);
  std::size_t overlapping[2] = {0, 0}, reached[2] = {0, 0};
  for (const RunRecord& rec : report.runs) {
    const int k = rec.kind == PenaltyKind::DIoULoss ? 0 : 1;
    if (rec.initial_iou > 0.0) {
      ++overlapping[k];
      if (rec.reached_iou) ++reached[k];
    }
  }
  for (int k = 0; k < 2; ++k) {
    const double rate =
        static_cast<double>(reached[k]) / static_cast<double>(overlapping[k]);
    expect(outcome, rate >= 0.95,
           std::string(k == 0 ? "diou" : "miou") + " convergence " +
               fmt(rate) + " (" + fmt(double(reached[k])) + "/" +
               fmt(double(overlapping[k])) + ")");
  }

  BenchmarkConfig straight;
  straight.kinds = {PenaltyKind::MIoULoss};
  straight.target = Box(0, 0, 2, 2);
  straight.center_offsets = {1.0, 2.0};
  straight.scales = {2.0};
  straight.aspects = {1.0};
  straight.center_only = true;
  straight.penalty_term_only = true;
  straight.center_eps = 1e-6;
  straight.iou_tau = 2.0;
  straight.record_trajectories = true;
  const BenchmarkReport lines = run_regression_benchmark(straight);
  for (const RunRecord& rec : lines.runs) {
    const double sx = rec.start.cx, sy = rec.start.cy;
    const double norm = std::sqrt(sx * sx + sy * sy);
    double worst = 0.0;
    for (const Box& b : rec.trajectory)
      worst = std::max(worst, std::abs(b.cx * sy - b.cy * sx) / norm);
    expect(outcome, rec.reached_center && worst <= 1e-9,
           "trajectory deviation " + fmt(worst));
  }
  return outcome;
}

// 6. Toy experiment direction: on the fixed scene with seed 1 and 200
//    epochs, weighting negatives by falling overlap strictly lowers the
//    zero-overlap misclassification rate relative to the unweighted run.
Outcome criterion_6() {
  Outcome outcome;
  ToyConfig cfg;  // defaults: seed 1, 200 epochs
  cfg.loss.coeff_mode = CoeffMode::None;
  const ToyReport plain = run_toy_experiment(cfg);
  cfg.loss.coeff_mode = CoeffMode::NegOnly;
  const ToyReport weighted = run_toy_experiment(cfg);
  expect(outcome, weighted.negative_low.rate < plain.negative_low.rate,
         "low-bucket rates: weighted " + fmt(weighted.negative_low.rate) +
             " vs plain " + fmt(plain.negative_low.rate));
  return outcome;
}

// 7. Oracle equivalence: greedy NMS and the AP pipeline agree with
//    brute-force reference implementations on every generated instance
//    with up to 5 detections and 3 objects; the one-object ladder instance
//    lands at mean AP 0.3 and k-means recovers the planted pair within 2px.
Outcome criterion_7() {
  Outcome outcome;
  Rng rng(77);
  const auto thresholds = default_ap_thresholds();
  std::size_t nms_checked = 0, ap_checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<GroundTruth> gts;
    const std::size_t n_gt = 1 + rng.next_index(3);
    for (std::size_t g = 0; g < n_gt; ++g)
      gts.push_back({Box(rng.uniform(0, 6), rng.uniform(0, 6),
                         rng.uniform(0.5, 3), rng.uniform(0.5, 3)),
                     rng.next_double() < 0.8 ? "0" : "1"});
    std::vector<Detection> dets;
    const std::size_t n_det = rng.next_index(6);
    for (std::size_t d = 0; d < n_det; ++d) {
      const auto& gt = gts[rng.next_index(gts.size())];
      dets.push_back({Box(gt.box.cx + rng.uniform(-1, 1),
                          gt.box.cy + rng.uniform(-1, 1),
                          gt.box.w * rng.uniform(0.6, 1.5),
                          gt.box.h * rng.uniform(0.6, 1.5)),
                      0.05 + 0.9 * rng.next_double(), gt.image_id});
    }

    const double nms_t = 0.1 + 0.8 * rng.next_double();
    const auto kept = nms(dets, nms_t);
    const auto kept_oracle = oracle::nms(dets, nms_t);
    bool same = kept.size() == kept_oracle.size();
    for (std::size_t i = 0; same && i < kept.size(); ++i)
      same = kept[i].box == kept_oracle[i].box &&
             kept[i].score == kept_oracle[i].score;
    expect(outcome, same, "nms mismatch at trial " + std::to_string(trial));
    ++nms_checked;

    const double impl = evaluate_ap(dets, gts, thresholds).ap;
    const double ref = oracle::mean_ap(dets, gts, thresholds);
    expect(outcome, std::abs(impl - ref) <= 1e-12,
           "ap mismatch at trial " + std::to_string(trial) + ": " + fmt(impl) +
               " vs " + fmt(ref));
    ++ap_checked;
  }
  expect(outcome, nms_checked == 400 && ap_checked == 400, "instance count");

  const std::vector<GroundTruth> one_gt = {{Box(0, 0, 2, 2), "0"}};
  const std::vector<Detection> one_det = {{Box(0.5, 0, 2, 2), 0.9, "0"}};
  const double single = evaluate_ap(one_det, one_gt, thresholds).ap;
  expect(outcome, std::abs(single - 0.3) <= 1e-12,
         "one-object ladder AP " + fmt(single));

  Rng planted_rng(42);
  std::vector<BoxSize> sizes;
  for (int i = 0; i < 50; ++i)
    sizes.push_back({10 + planted_rng.uniform(-1, 1), 10 + planted_rng.uniform(-1, 1)});
  for (int i = 0; i < 50; ++i)
    sizes.push_back({100 + planted_rng.uniform(-5, 5), 80 + planted_rng.uniform(-5, 5)});
  const KMeansResult clusters = kmeans_anchors(sizes, 2, 3);
  expect(outcome,
         clusters.clusters.size() == 2 &&
             std::abs(clusters.clusters[0].w - 10) < 2.0 &&
             std::abs(clusters.clusters[0].h - 10) < 2.0 &&
             std::abs(clusters.clusters[1].w - 100) < 2.0 &&
             std::abs(clusters.clusters[1].h - 80) < 2.0,
         "planted centroids not recovered");
  return outcome;
}

// 8. Determinism: every command rerun with the same inputs reproduces its
//    report byte for byte, on stdout and through file output.
Outcome criterion_8() {
  Outcome outcome;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "boxlab_acceptance";
  fs::create_directories(dir);

  const auto write = [&](const char* name, const std::string& body) {
    const fs::path path = dir / name;
    std::ofstream f(path);
    f << body;
    return path.string();
  };
  const std::string dets = write(
      "dets.jsonl",
      "{\"cx\":0.5,\"cy\":0,\"w\":2,\"h\":2,\"score\":0.9,\"image_id\":\"0\"}\n"
      "{\"cx\":6.2,\"cy\":0,\"w\":2,\"h\":2,\"score\":0.7,\"image_id\":\"0\"}\n");
  const std::string gts = write(
      "gts.jsonl",
      "{\"cx\":0,\"cy\":0,\"w\":2,\"h\":2,\"image_id\":\"0\"}\n"
      "{\"cx\":6,\"cy\":0,\"w\":2,\"h\":2,\"image_id\":\"0\"}\n");
  std::string boxes;
  Rng rng(5);
  for (int i = 0; i < 40; ++i)
    boxes += box_to_json_line(Box(0, 0, 10 + rng.uniform(-1, 1),
                                  10 + rng.uniform(-1, 1))) +
             "\n";
  for (int i = 0; i < 40; ++i)
    boxes += box_to_json_line(Box(0, 0, 100 + rng.uniform(-5, 5),
                                  80 + rng.uniform(-5, 5))) +
             "\n";
  const std::string cluster_in = write("boxes.jsonl", boxes);

  const std::vector<std::vector<std::string>> commands = {
      {"sweep", "--a", "1", "--dr", "0.1", "--steps", "720"},
      {"gradcheck", "--kind", "all", "--n", "150", "--seed", "7"},
      {"converge", "--kinds", "diou,miou", "--max-steps", "250"},
      {"toy", "--epochs", "30", "--coeff-mode", "neg"},
      {"cluster", "--k", "2", "--seed", "3", cluster_in},
      {"nms", "--iou", "0.5", dets},
      {"eval", dets, gts},
      {"coeff", "--steps", "101"},
  };
  for (const auto& args : commands) {
    std::ostringstream out_a, out_b, err;
    const int code_a = run_cli(args, out_a, err);
    const int code_b = run_cli(args, out_b, err);
    expect(outcome, code_a == 0 && code_b == 0, args[0] + " exit code");
    expect(outcome, out_a.str() == out_b.str(),
           args[0] + " stdout not byte-identical");
    expect(outcome, !out_a.str().empty(), args[0] + " produced no output");
  }

  // file-output route: rerun the very command the manifest records
  const std::string out_path = (dir / "eval_rerun.csv").string();
  const auto slurp = [](const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  std::ostringstream sink, err;
  expect(outcome,
         run_cli({"eval", dets, gts, "--out", out_path}, sink, err) == 0,
         "eval file run failed");
  const std::string first = slurp(out_path);
  expect(outcome,
         run_cli({"eval", dets, gts, "--out", out_path}, sink, err) == 0,
         "eval rerun failed");
  expect(outcome, !first.empty() && first == slurp(out_path),
         "file outputs differ across reruns");
  return outcome;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria = {
    {1, "coefficient fidelity at overlap 0.8 and 0", criterion_1},
    {2, "analytic gradients vs finite-difference oracle (<= 1e-5)", criterion_2},
    {3, "center-gradient alignment (MIoU exact, DIoU 8.13 deg)", criterion_3},
    {4, "direction sweep values, monotonicity, 225 deg argmin", criterion_4},
    {5, "descent benchmark: >= 95% convergence and straight MIoU paths", criterion_5},
    {6, "toy experiment: negative weighting lowers zero-overlap errors", criterion_6},
    {7, "NMS/AP/k-means against brute-force oracles", criterion_7},
    {8, "byte-identical reruns for every command", criterion_8},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 8) {
      std::cerr << "usage: " << argv[0] << " [criterion 1-8]\n";
      return 2;
    }
  }
  bool all_pass = true;
  for (const Criterion& criterion : kCriteria) {
    if (only != 0 && criterion.id != only) continue;
    const Outcome outcome = criterion.run();
    all_pass = all_pass && outcome.pass;
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion "
              << criterion.id << ": " << criterion.title;
    if (!outcome.pass) std::cout << " -- " << outcome.detail;
    std::cout << "\n";
  }
  return all_pass ? 0 : 1;
}
