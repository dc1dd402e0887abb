#include "boxlab/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "boxlab/assignment.hpp"
#include "boxlab/geometry.hpp"
#include "boxlab/jsonl.hpp"
#include "boxlab/losses.hpp"
#include "boxlab/manifest.hpp"
#include "boxlab/postprocess.hpp"
#include "boxlab/sampling.hpp"
#include "boxlab/simulation.hpp"

namespace boxlab {

namespace {

constexpr double kDegPerRad = 180.0 / 3.14159265358979323846;

// Reports are assembled in memory and land either on stdout or on disk via
// a temp file plus rename, so a failed run never leaves partial output.
void emit(const std::string& content, const std::string& out_path,
          std::ostream& out) {
  if (out_path.empty()) {
    out << content;
    return;
  }
  const std::string tmp = out_path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << content;
  }
  std::filesystem::rename(tmp, out_path);
}

std::string output_name(const std::string& out_path) {
  return out_path.empty() ? "-" : out_path;
}

std::vector<PenaltyKind> parse_kind_list(const std::string& csv) {
  std::vector<PenaltyKind> kinds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "all") {
      return {PenaltyKind::IoULoss, PenaltyKind::GIoULoss, PenaltyKind::DIoULoss,
              PenaltyKind::MIoULoss};
    }
    kinds.push_back(parse_penalty_kind(item));
  }
  if (kinds.empty()) throw std::invalid_argument("empty kind list");
  return kinds;
}

// ---- sweep ----

int cmd_sweep(double a, double dr, std::size_t steps, bool geometric,
              const std::string& out_path, std::ostream& out) {
  const SweepConfig cfg{a, dr, steps};
  const SweepProfile profile =
      geometric ? direction_sweep_geometric(cfg) : direction_sweep(cfg);

  RunManifest manifest;
  manifest.command = "sweep";
  manifest.config = {{"a", a},
                     {"dr", dr},
                     {"steps", steps},
                     {"model", geometric ? "geometric" : "as-printed"}};
  manifest.outputs = {output_name(out_path)};
  manifest.notes = {
      "the as-printed ratio is monotone in cos(theta)+sin(theta), so its "
      "minimum sits at 225 deg; the 157 deg minimum sometimes quoted for "
      "this moving-vector model is not reproduced by the formula"};

  std::string csv = manifest.preamble() + "\n";
  csv += "theta_deg,r_diou\n";
  for (const SweepPoint& p : profile.points)
    csv += format_double(p.theta * kDegPerRad) + "," + format_double(p.r) + "\n";
  csv += "# argmin: theta_deg=" + format_double(profile.argmin_theta * kDegPerRad) +
         ",r_diou=" + format_double(profile.argmin_r) + "\n";
  emit(csv, out_path, out);
  return 0;
}

// ---- gradcheck ----

// Central finite difference of the implemented penalty value. The MIoU
// normalizers are pinned at their unperturbed values to mirror their
// constant role in the analytic gradient.
Grad4 central_difference(PenaltyKind kind, const Box& pred, const Box& target,
                         double step) {
  const double mean_w = (pred.w + target.w) / 2.0;
  const double mean_h = (pred.h + target.h) / 2.0;
  const auto value = [&](const Box& b) {
    if (kind == PenaltyKind::MIoULoss)
      return 1.0 - iou(b, target) + r_miou_frozen(b, target, mean_w, mean_h);
    return loc_penalty(kind, b, target);
  };
  double p[4] = {pred.cx, pred.cy, pred.w, pred.h};
  double g[4];
  for (int k = 0; k < 4; ++k) {
    double hi[4] = {p[0], p[1], p[2], p[3]};
    double lo[4] = {p[0], p[1], p[2], p[3]};
    hi[k] += step;
    lo[k] -= step;
    g[k] = (value(Box(hi[0], hi[1], hi[2], hi[3])) -
            value(Box(lo[0], lo[1], lo[2], lo[3]))) /
           (2.0 * step);
  }
  return {g[0], g[1], g[2], g[3]};
}

double max_rel_error(PenaltyKind kind, std::size_t n, std::uint64_t seed,
                     double step) {
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const BoxPair pair = sample_box_pair(rng, i);
    const Grad4 analytic = loc_penalty_grad(kind, pair.pred, pair.target);
    const Grad4 fd = central_difference(kind, pair.pred, pair.target, step);
    const double a[4] = {analytic.d_cx, analytic.d_cy, analytic.d_w,
                         analytic.d_h};
    const double f[4] = {fd.d_cx, fd.d_cy, fd.d_w, fd.d_h};
    for (int k = 0; k < 4; ++k)
      worst = std::max(worst,
                       std::abs(a[k] - f[k]) / std::max(1.0, std::abs(f[k])));
  }
  return worst;
}

int cmd_gradcheck(const std::string& kind_csv, std::size_t n,
                  std::uint64_t seed, double tol, double step,
                  const std::string& out_path, std::ostream& out) {
  const std::vector<PenaltyKind> kinds = parse_kind_list(kind_csv);

  RunManifest manifest;
  manifest.command = "gradcheck";
  manifest.config = {{"kind", kind_csv}, {"n", n},   {"seed", seed},
                     {"tol", tol},       {"step", step}};
  manifest.seed = seed;
  manifest.outputs = {output_name(out_path)};

  std::string csv = manifest.preamble() + "\n";
  csv += "kind,samples,max_rel_err,tolerance,status\n";
  bool all_pass = true;
  for (PenaltyKind kind : kinds) {
    const double err = max_rel_error(kind, n, seed, step);
    const bool pass = err <= tol;
    all_pass = all_pass && pass;
    csv += penalty_kind_name(kind) + "," + std::to_string(n) + "," +
           format_double(err) + "," + format_double(tol) + "," +
           (pass ? "pass" : "fail") + "\n";
  }
  emit(csv, out_path, out);
  return all_pass ? 0 : 2;
}

// ---- converge ----

int cmd_converge(const std::string& kind_csv, double lr, std::size_t max_steps,
                 double tau, double center_eps, bool center_only,
                 bool penalty_only, std::uint64_t seed,
                 const std::string& traj_path, const std::string& out_path,
                 std::ostream& out) {
  BenchmarkConfig cfg;
  cfg.kinds = parse_kind_list(kind_csv);
  cfg.learning_rate = lr;
  cfg.max_steps = max_steps;
  cfg.iou_tau = tau;
  cfg.center_eps = center_eps;
  cfg.center_only = center_only;
  cfg.penalty_term_only = penalty_only;
  cfg.record_trajectories = !traj_path.empty();
  cfg.seed = seed;

  const BenchmarkReport report = run_regression_benchmark(cfg);

  RunManifest manifest;
  manifest.command = "converge";
  manifest.config = {{"kinds", kind_csv},
                     {"lr", lr},
                     {"max_steps", max_steps},
                     {"tau", tau},
                     {"center_eps", center_eps},
                     {"center_only", center_only},
                     {"penalty_only", penalty_only}};
  manifest.seed = seed;
  manifest.outputs = {output_name(out_path)};
  if (!traj_path.empty()) manifest.outputs.push_back(traj_path);

  std::string csv = manifest.preamble() + "\n";
  csv +=
      "kind,start_cx,start_cy,start_w,start_h,initial_iou,final_iou,steps,"
      "reached_iou,reached_center,diverged\n";
  struct Tally {
    std::size_t total = 0, reached = 0, overlapping = 0, overlapping_reached = 0;
  };
  std::map<std::string, Tally> tallies;
  for (const RunRecord& rec : report.runs) {
    const std::string kind = penalty_kind_name(rec.kind);
    csv += kind + "," + format_double(rec.start.cx) + "," +
           format_double(rec.start.cy) + "," + format_double(rec.start.w) +
           "," + format_double(rec.start.h) + "," +
           format_double(rec.initial_iou) + "," + format_double(rec.final_iou) +
           "," + std::to_string(rec.steps) + "," +
           (rec.reached_iou ? "1" : "0") + "," +
           (rec.reached_center ? "1" : "0") + "," + (rec.diverged ? "1" : "0") +
           "\n";
    Tally& t = tallies[kind];
    ++t.total;
    if (rec.reached_iou) ++t.reached;
    if (rec.initial_iou > 0.0) {
      ++t.overlapping;
      if (rec.reached_iou) ++t.overlapping_reached;
    }
  }
  for (PenaltyKind kind : cfg.kinds) {
    const std::string name = penalty_kind_name(kind);
    const Tally& t = tallies[name];
    csv += "# converged[" + name + "]: " + std::to_string(t.reached) + "/" +
           std::to_string(t.total) + " overall, " +
           std::to_string(t.overlapping_reached) + "/" +
           std::to_string(t.overlapping) + " overlapping\n";
  }
  emit(csv, out_path, out);

  if (!traj_path.empty()) {
    std::string traj = manifest.preamble() + "\n";
    traj += "kind,run,step,cx,cy,w,h,center_dist\n";
    std::size_t run_index = 0;
    for (const RunRecord& rec : report.runs) {
      for (std::size_t s = 0; s < rec.trajectory.size(); ++s) {
        const Box& b = rec.trajectory[s];
        traj += penalty_kind_name(rec.kind) + "," + std::to_string(run_index) +
                "," + std::to_string(s) + "," + format_double(b.cx) + "," +
                format_double(b.cy) + "," + format_double(b.w) + "," +
                format_double(b.h) + "," +
                format_double(rec.center_distances[s]) + "\n";
      }
      ++run_index;
    }
    emit(traj, traj_path, out);
  }
  return 0;
}

// ---- toy ----

int cmd_toy(std::size_t epochs, std::uint64_t seed, const std::string& mode,
            double gamma, double alpha, std::size_t ratio,
            const std::string& loc, double lr, const std::string& gts_path,
            const std::string& out_path, std::ostream& out) {
  ToyConfig cfg;
  cfg.epochs = epochs;
  cfg.seed = seed;
  cfg.learning_rate = lr;
  cfg.loss.coeff_mode = parse_coeff_mode(mode);
  cfg.loss.coeff.gamma = gamma;
  cfg.loss.alpha = alpha;
  cfg.loss.mining_ratio = ratio;
  cfg.loss.loc_kind = parse_penalty_kind(loc);

  RunManifest manifest;
  manifest.command = "toy";
  manifest.config = {{"epochs", epochs}, {"coeff_mode", mode}, {"gamma", gamma},
                     {"alpha", alpha},   {"ratio", ratio},     {"loc", loc},
                     {"lr", lr}};
  manifest.seed = seed;
  if (!gts_path.empty()) {
    cfg.gts = read_boxes_jsonl(gts_path);
    manifest.add_input(gts_path);
  }
  manifest.outputs = {output_name(out_path)};

  const ToyReport report = run_toy_experiment(cfg);

  std::string csv = manifest.preamble() + "\n";
  csv += "metric,value\n";
  const auto row = [&](const std::string& name, const std::string& value) {
    csv += name + "," + value + "\n";
  };
  row("n_anchors", std::to_string(report.n_anchors));
  row("n_positive", std::to_string(report.n_positive));
  const auto bucket = [&](const std::string& name, const BucketStat& b) {
    row("neg_" + name + "_count", std::to_string(b.count));
    row("neg_" + name + "_misclassified", std::to_string(b.misclassified));
    row("neg_" + name + "_rate", format_double(b.rate));
  };
  bucket("low", report.negative_low);
  bucket("mid", report.negative_mid);
  bucket("high", report.negative_high);
  row("pos_score_iou_correlation",
      format_double(report.positive_score_iou_correlation));
  if (report.ap) {
    row("ap", format_double(report.ap->ap));
    row("ap75", format_double(report.ap->ap75));
  }
  row("final_loss", format_double(report.final_loss));
  emit(csv, out_path, out);
  return 0;
}

// ---- cluster ----

int cmd_cluster(std::size_t k, std::uint64_t seed, std::size_t max_iters,
                const std::string& dist, const std::string& boxes_path,
                const std::string& out_path, std::ostream& out) {
  const ClusterDistance distance = [&] {
    if (dist == "iou") return ClusterDistance::IoU;
    if (dist == "euclidean") return ClusterDistance::Euclidean;
    throw std::invalid_argument("unknown distance: " + dist);
  }();

  const std::vector<Box> boxes = read_boxes_jsonl(boxes_path);
  std::vector<BoxSize> sizes;
  for (const Box& b : boxes) sizes.push_back({b.w, b.h});

  RunManifest manifest;
  manifest.command = "cluster";
  manifest.config = {
      {"k", k}, {"max_iters", max_iters}, {"dist", dist}};
  manifest.seed = seed;
  manifest.add_input(boxes_path);
  manifest.outputs = {output_name(out_path)};

  const KMeansResult result = kmeans_anchors(sizes, k, seed, max_iters, distance);

  std::string csv = manifest.preamble() + "\n";
  csv += "w,h,member_count\n";
  for (const SizeCluster& c : result.clusters)
    csv += format_double(c.w) + "," + format_double(c.h) + "," +
           std::to_string(c.member_count) + "\n";
  csv += "# distortion=" + format_double(result.final_distortion) +
         ",iterations=" + std::to_string(result.iterations) + "\n";
  emit(csv, out_path, out);
  return 0;
}

// ---- nms ----

int cmd_nms(double threshold, const std::string& dets_path,
            const std::string& out_path, std::ostream& out) {
  const std::vector<Detection> dets = read_detections_jsonl(dets_path);

  RunManifest manifest;
  manifest.command = "nms";
  manifest.config = {{"iou", threshold}};
  manifest.add_input(dets_path);
  manifest.outputs = {output_name(out_path)};

  std::string body = manifest.preamble() + "\n";
  for (const Detection& det : nms(dets, threshold))
    body += detection_to_json_line(det) + "\n";
  emit(body, out_path, out);
  return 0;
}

// ---- eval ----

int cmd_eval(const std::string& dets_path, const std::string& gts_path,
             const std::string& out_path, std::ostream& out) {
  const std::vector<Detection> dets = read_detections_jsonl(dets_path);
  const std::vector<GroundTruth> gts = read_ground_truths_jsonl(gts_path);

  RunManifest manifest;
  manifest.command = "eval";
  manifest.add_input(dets_path);
  manifest.add_input(gts_path);
  manifest.outputs = {output_name(out_path)};

  const ApReport report = evaluate_ap(dets, gts);

  std::string csv = manifest.preamble() + "\n";
  csv += "metric,value\n";
  csv += "ap," + format_double(report.ap) + "\n";
  csv += "ap75," + format_double(report.ap75) + "\n";
  const auto opt_row = [&](const std::string& name,
                           const std::optional<double>& v) {
    csv += name + "," + (v ? format_double(*v) : std::string("absent")) + "\n";
  };
  opt_row("ap_s", report.ap_s);
  opt_row("ap_m", report.ap_m);
  opt_row("ap_l", report.ap_l);
  for (const auto& [threshold, value] : report.per_threshold)
    csv += "ap@" + format_double(threshold) + "," + format_double(value) + "\n";
  emit(csv, out_path, out);
  return 0;
}

// ---- coeff ----

int cmd_coeff(const std::vector<double>& gammas, std::size_t steps,
              const std::string& branch, const std::string& out_path,
              std::ostream& out) {
  if (steps < 2) throw std::invalid_argument("need at least 2 table steps");
  CoeffConfig cfg;
  cfg.negative_branch = [&] {
    if (branch == "one-minus") return NegativeBranch::OneMinusIoUPow;
    if (branch == "as-printed") return NegativeBranch::IoUPowAsPrinted;
    throw std::invalid_argument("unknown negative branch: " + branch);
  }();

  RunManifest manifest;
  manifest.command = "coeff";
  manifest.config = {{"gammas", gammas}, {"steps", steps}, {"neg_branch", branch}};
  manifest.outputs = {output_name(out_path)};

  std::string csv = manifest.preamble() + "\n";
  csv += "iou,gamma,f_positive,f_negative\n";
  for (double gamma : gammas) {
    cfg.gamma = gamma;
    for (std::size_t i = 0; i < steps; ++i) {
      const double v =
          static_cast<double>(i) / static_cast<double>(steps - 1);
      csv += format_double(v) + "," + format_double(gamma) + "," +
             format_double(iou_coefficient(SampleKind::Positive, v, cfg)) +
             "," +
             format_double(iou_coefficient(SampleKind::Negative, v, cfg)) +
             "\n";
    }
  }
  emit(csv, out_path, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"boxlab: box-regression and classification loss laboratory"};
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "direction profile of the normalized center-distance ratio");
  double sweep_a = 1.0, sweep_dr = 0.1;
  std::size_t sweep_steps = 360;
  bool sweep_geometric = false;
  std::string sweep_out;
  sweep->add_option("--a", sweep_a, "box side")->check(CLI::PositiveNumber);
  sweep->add_option("--dr", sweep_dr, "move length")->check(CLI::PositiveNumber);
  sweep->add_option("--steps", sweep_steps, "angular resolution")
      ->check(CLI::Range(std::size_t{4}, std::size_t{10'000'000}));
  sweep->add_flag("--geometric", sweep_geometric,
                  "use the true enclosing box instead of the closed form");
  sweep->add_option("--out", sweep_out, "output CSV path (default stdout)");

  // gradcheck
  auto* gradcheck = app.add_subcommand(
      "gradcheck", "analytic gradients versus central finite differences");
  std::string gc_kind = "all";
  std::size_t gc_n = 1000;
  std::uint64_t gc_seed = 7;
  double gc_tol = 1e-5, gc_step = 1e-6;
  std::string gc_out;
  gradcheck->add_option("--kind", gc_kind, "iou|giou|diou|miou|all or a comma list");
  gradcheck->add_option("--n", gc_n, "samples per kind")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100'000'000}));
  gradcheck->add_option("--seed", gc_seed, "sampler seed");
  gradcheck->add_option("--tol", gc_tol, "max relative error accepted")
      ->check(CLI::PositiveNumber);
  gradcheck->add_option("--step", gc_step, "finite-difference step")
      ->check(CLI::PositiveNumber);
  gradcheck->add_option("--out", gc_out, "output CSV path (default stdout)");

  // converge
  auto* converge = app.add_subcommand(
      "converge", "gradient-descent box regression benchmark");
  std::string cv_kinds = "all";
  double cv_lr = 0.1, cv_tau = 0.9, cv_center_eps = 0.0;
  std::size_t cv_max_steps = 500;
  bool cv_center_only = false, cv_penalty_only = false;
  std::uint64_t cv_seed = 0;
  std::string cv_traj, cv_out;
  converge->add_option("--kinds", cv_kinds, "penalty kinds, comma list or all");
  converge->add_option("--lr", cv_lr, "step size")->check(CLI::PositiveNumber);
  converge->add_option("--max-steps", cv_max_steps, "step budget per run");
  converge->add_option("--tau", cv_tau, "IoU convergence threshold")
      ->check(CLI::PositiveNumber);
  converge->add_option("--center-eps", cv_center_eps,
                       "center-distance convergence threshold (0 disables)");
  converge->add_flag("--center-only", cv_center_only, "update centers only");
  converge->add_flag("--penalty-only", cv_penalty_only,
                     "descend on the center-distance term alone");
  converge->add_option("--seed", cv_seed, "recorded in the manifest");
  converge->add_option("--trajectories", cv_traj, "also write per-step CSV here");
  converge->add_option("--out", cv_out, "output CSV path (default stdout)");

  // toy
  auto* toy = app.add_subcommand(
      "toy", "synthetic detection-head experiment on a fixed scene");
  std::size_t toy_epochs = 200, toy_ratio = 3;
  std::uint64_t toy_seed = 1;
  std::string toy_mode = "none", toy_loc = "miou", toy_gts, toy_out;
  double toy_gamma = 2.0, toy_alpha = 1.0, toy_lr = 0.6;
  toy->add_option("--epochs", toy_epochs, "descent epochs");
  toy->add_option("--seed", toy_seed, "scene initialization seed");
  toy->add_option("--coeff-mode", toy_mode, "none|pos|neg|both");
  toy->add_option("--gamma", toy_gamma, "coefficient exponent")
      ->check(CLI::PositiveNumber);
  toy->add_option("--alpha", toy_alpha, "localization weight")
      ->check(CLI::PositiveNumber);
  toy->add_option("--ratio", toy_ratio, "negatives per positive")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  toy->add_option("--loc", toy_loc, "localization loss: l1|iou|giou|diou|miou");
  toy->add_option("--lr", toy_lr, "step size")->check(CLI::PositiveNumber);
  toy->add_option("--gts", toy_gts, "replace the built-in objects (boxes JSONL)");
  toy->add_option("--out", toy_out, "output CSV path (default stdout)");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "k-means over box sizes");
  std::size_t cl_k = 2, cl_max_iters = 100;
  std::uint64_t cl_seed = 0;
  std::string cl_dist = "iou", cl_input, cl_out;
  cluster->add_option("--k", cl_k, "cluster count")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100'000}));
  cluster->add_option("--seed", cl_seed, "seeding stream");
  cluster->add_option("--max-iters", cl_max_iters, "iteration cap");
  cluster->add_option("--dist", cl_dist, "iou|euclidean");
  cluster->add_option("input", cl_input, "boxes JSONL")->required();
  cluster->add_option("--out", cl_out, "output CSV path (default stdout)");

  // nms
  auto* nms_cmd = app.add_subcommand("nms", "greedy non-maximum suppression");
  double nms_iou = 0.5;
  std::string nms_input, nms_out;
  nms_cmd->add_option("--iou", nms_iou, "suppression threshold")
      ->check(CLI::Range(0.0, 1.0));
  nms_cmd->add_option("input", nms_input, "detections JSONL")->required();
  nms_cmd->add_option("--out", nms_out, "output JSONL path (default stdout)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "average-precision evaluation");
  std::string ev_dets, ev_gts, ev_out;
  eval_cmd->add_option("dets", ev_dets, "detections JSONL")->required();
  eval_cmd->add_option("gts", ev_gts, "ground truths JSONL")->required();
  eval_cmd->add_option("--out", ev_out, "output CSV path (default stdout)");

  // coeff
  auto* coeff_cmd =
      app.add_subcommand("coeff", "overlap-coefficient tables");
  std::vector<double> co_gammas = {0.5, 1.0, 2.0, 5.0};
  std::size_t co_steps = 101;
  std::string co_branch = "one-minus", co_out;
  coeff_cmd->add_option("--gamma", co_gammas, "exponent list")
      ->check(CLI::PositiveNumber);
  coeff_cmd->add_option("--steps", co_steps, "table rows per gamma");
  coeff_cmd->add_option("--neg-branch", co_branch, "one-minus|as-printed");
  coeff_cmd->add_option("--out", co_out, "output CSV path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  try {
    if (sweep->parsed())
      return cmd_sweep(sweep_a, sweep_dr, sweep_steps, sweep_geometric,
                       sweep_out, out);
    if (gradcheck->parsed())
      return cmd_gradcheck(gc_kind, gc_n, gc_seed, gc_tol, gc_step, gc_out, out);
    if (converge->parsed())
      return cmd_converge(cv_kinds, cv_lr, cv_max_steps, cv_tau, cv_center_eps,
                          cv_center_only, cv_penalty_only, cv_seed, cv_traj,
                          cv_out, out);
    if (toy->parsed())
      return cmd_toy(toy_epochs, toy_seed, toy_mode, toy_gamma, toy_alpha,
                     toy_ratio, toy_loc, toy_lr, toy_gts, toy_out, out);
    if (cluster->parsed())
      return cmd_cluster(cl_k, cl_seed, cl_max_iters, cl_dist, cl_input,
                         cl_out, out);
    if (nms_cmd->parsed()) return cmd_nms(nms_iou, nms_input, nms_out, out);
    if (eval_cmd->parsed()) return cmd_eval(ev_dets, ev_gts, ev_out, out);
    if (coeff_cmd->parsed())
      return cmd_coeff(co_gammas, co_steps, co_branch, co_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "no command selected\n";
  return 1;
}

}  // namespace boxlab
