#include "topocp/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "topocp/batch.hpp"
#include "topocp/metrics.hpp"
#include "topocp/persistence.hpp"
#include "topocp/raster_io.hpp"
#include "topocp/synth.hpp"
#include "topocp/topo_loss.hpp"

namespace topocp {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::span<const std::byte> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::byte*>(s.data()), s.size()};
}

BinaryMask load_mask(const fs::path& path, double threshold) {
  return binarize(load_raster(path), threshold);
}

void check_pairs(const std::vector<std::string>& preds, const std::vector<std::string>& gts) {
  if (preds.size() != gts.size()) {
    throw UsageError("--pred and --gt must be given the same number of times");
  }
}

struct DiagramArgs {
  std::string input;
  std::string out;
  std::vector<int> dims{0, 1};
};

struct LossArgs {
  std::vector<std::string> pred;
  std::vector<std::string> gt;
  std::vector<int> dims{0, 1};
  double lambda = 1.0;
  std::vector<std::string> grad_out;
  int jobs = 1;
};

struct MetricsArgs {
  std::vector<std::string> pred;
  std::vector<std::string> gt;
  double threshold = kDefaultThreshold;
  std::vector<double> spacing{1.0, 1.0};
  int jobs = 1;
};

struct BettiArgs {
  std::string mask;
  double threshold = kDefaultThreshold;
};

struct SynthArgs {
  RibbonSpec spec;
  std::string out_dir;
  std::size_t count = 1;
};

void run_diagram(const DiagramArgs& a) {
  const auto diagram = compute_persistence(load_raster(a.input));
  write_file_atomic(a.out, as_bytes(diagram_csv(diagram, a.dims)));
}

void run_loss(const LossArgs& a, std::ostream& out) {
  check_pairs(a.pred, a.gt);
  if (!a.grad_out.empty() && a.grad_out.size() != a.pred.size()) {
    throw UsageError("--grad-out must be given once per --pred");
  }
  std::vector<LikelihoodMap> preds;
  std::vector<BinaryMask> gts;
  for (std::size_t i = 0; i < a.pred.size(); ++i) {
    preds.push_back(load_raster(a.pred[i]));
    gts.push_back(load_mask(a.gt[i], kDefaultThreshold));
  }
  TopoLossOptions options;
  options.dim0 = std::find(a.dims.begin(), a.dims.end(), 0) != a.dims.end();
  options.dim1 = std::find(a.dims.begin(), a.dims.end(), 1) != a.dims.end();
  options.weight = a.lambda;
  const auto results = topo_loss_batch(preds, gts, options, a.jobs);
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!a.grad_out.empty()) {
      write_file_atomic(a.grad_out[i], write_real_f32r(results[i].grad));
    }
    out << "{\"topo_loss\": " << nlohmann::json(results[i].value).dump() << "}\n";
  }
}

void run_metrics(const MetricsArgs& a, std::ostream& out) {
  check_pairs(a.pred, a.gt);
  const Spacing spacing(a.spacing[0], a.spacing[1]);
  std::vector<LikelihoodMap> preds;
  std::vector<BinaryMask> gts;
  for (std::size_t i = 0; i < a.pred.size(); ++i) {
    preds.push_back(load_raster(a.pred[i]));
    gts.push_back(load_mask(a.gt[i], kDefaultThreshold));
  }
  for (const auto& report : evaluate_batch(preds, gts, spacing, a.threshold, a.jobs)) {
    out << to_json(report) << '\n';
  }
}

void run_betti(const BettiArgs& a, std::ostream& out) {
  const auto b = betti_numbers(load_mask(a.mask, a.threshold));
  out << "b0=" << b.b0 << " b1=" << b.b1 << '\n';
}

void run_synth(const SynthArgs& a) {
  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  std::string manifest;
  for (std::size_t i = 0; i < a.count; ++i) {
    RibbonSpec spec = a.spec;
    spec.seed = a.spec.seed + i;
    const auto sample = gen_ribbon(spec);
    char id[32];
    std::snprintf(id, sizeof id, "sample_%04zu", i);
    const std::string image = std::string(id) + "_image.f32r";
    const std::string gt = std::string(id) + "_gt.pgm";
    const std::string degraded = std::string(id) + "_degraded.f32r";
    save_raster(dir / image, sample.clean_likelihood, RasterFormat::F32R);
    save_raster(dir / gt, as_likelihood(sample.gt), RasterFormat::PGM8);
    save_raster(dir / degraded, sample.degraded_likelihood, RasterFormat::F32R);
    nlohmann::ordered_json j;
    j["id"] = id;
    j["image_path"] = image;
    j["gt_path"] = gt;
    j["degraded_path"] = degraded;
    j["spec"] = nlohmann::ordered_json::parse(to_json(spec));
    manifest += j.dump() + "\n";
  }
  write_file_atomic(dir / "manifest.jsonl", as_bytes(manifest));
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topology-aware segmentation toolkit", "topocp"};
  app.require_subcommand(1);

  const auto dim_check = CLI::IsMember({0, 1});
  const auto unit_range = CLI::Range(0.0, 1.0);

  DiagramArgs diagram_args;
  auto* diagram = app.add_subcommand("diagram", "persistence diagram of a likelihood map as CSV");
  diagram->add_option("--input", diagram_args.input, "likelihood raster (.pgm/.f32r)")->required();
  diagram->add_option("--out", diagram_args.out, "output CSV path")->required();
  diagram->add_option("--dims", diagram_args.dims, "dimensions to emit")
      ->delimiter(',')
      ->check(dim_check);

  LossArgs loss_args;
  auto* loss = app.add_subcommand("loss", "topological loss and its gradient");
  loss->add_option("--pred", loss_args.pred, "predicted likelihood raster")->required();
  loss->add_option("--gt", loss_args.gt, "ground-truth mask raster")->required();
  loss->add_option("--dims", loss_args.dims, "homology dimensions in the loss")
      ->delimiter(',')
      ->check(dim_check);
  loss->add_option("--lambda", loss_args.lambda, "loss weight")->check(CLI::NonNegativeNumber);
  loss->add_option("--grad-out", loss_args.grad_out, "gradient output (.f32r, unclamped)");
  loss->add_option("--jobs", loss_args.jobs, "pairs processed concurrently")
      ->check(CLI::PositiveNumber);

  MetricsArgs metrics_args;
  auto* metrics = app.add_subcommand("metrics", "DSC, ASD, HD95 and Betti error");
  metrics->add_option("--pred", metrics_args.pred, "predicted likelihood raster")->required();
  metrics->add_option("--gt", metrics_args.gt, "ground-truth mask raster")->required();
  metrics->add_option("--threshold", metrics_args.threshold, "binarization threshold")
      ->check(unit_range);
  metrics->add_option("--spacing", metrics_args.spacing, "pixel spacing DY DX in mm")
      ->expected(2)
      ->check(CLI::PositiveNumber);
  metrics->add_option("--jobs", metrics_args.jobs, "pairs processed concurrently")
      ->check(CLI::PositiveNumber);

  BettiArgs betti_args;
  auto* betti = app.add_subcommand("betti", "Betti numbers of a binarized raster");
  betti->add_option("--mask", betti_args.mask, "mask or likelihood raster")->required();
  betti->add_option("--threshold", betti_args.threshold, "binarization threshold")
      ->check(unit_range);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "synthetic ribbon images with known topology");
  synth->add_option("--seed", synth_args.spec.seed)->required();
  synth->add_option("--size", synth_args.spec.size)->required();
  synth->add_option("--components", synth_args.spec.components)->required();
  synth->add_option("--holes", synth_args.spec.holes)->required();
  synth->add_option("--thickness", synth_args.spec.thickness)->required();
  synth->add_option("--breaks", synth_args.spec.break_count)->required();
  synth->add_option("--blur", synth_args.spec.blur_radius, "Gaussian sigma in pixels")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--out-dir", synth_args.out_dir)->required();
  synth->add_option("--count", synth_args.count)->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*diagram) run_diagram(diagram_args);
    else if (*loss) run_loss(loss_args, out);
    else if (*metrics) run_metrics(metrics_args, out);
    else if (*betti) run_betti(betti_args, out);
    else if (*synth) run_synth(synth_args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "ERROR " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace topocp
