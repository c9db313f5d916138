// lanekit command-line toolkit: row-anchor sampling, coordinate map dumps,
// directional-IoU losses, synthetic dataset generation and CULane-style
// dataset evaluation with partial field-of-view reports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lanekit/lanekit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;    // malformed flags, files or lane data
constexpr int kExitDataset = 3;  // dataset-level inconsistencies

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  lanekit::write_text_file(path, text);
}

// Deterministic demo curve spanning the cropped region, used by `sample` to
// visualize anchor placement without any dataset.
lanekit::Lane demo_lane(const lanekit::ImageSpec& spec) {
  std::vector<lanekit::Point> pts;
  const double top = spec.cut_height_px;
  const double bottom = spec.height_px - 1;
  for (int j = 0; j <= 32; ++j) {
    const double t = static_cast<double>(j) / 32.0;
    const double y = top + t * (bottom - top);
    const double x = spec.width_px * (0.62 - 0.20 * t + 0.08 * t * t);
    pts.push_back({x, y});
  }
  return lanekit::Lane(pts);
}

struct SampleArgs {
  int n = 36;
  int height = 0;
  double base = 10.0;
  std::string mode = "focusing";
  int width = 1640;
  int cut = 0;
  std::string svg_out;
};

int run_sample(const SampleArgs& a) {
  lanekit::RowSampler sampler;
  sampler.n_sample = a.n;
  sampler.height = a.height;
  sampler.base = a.base;
  if (a.mode == "uniform")
    sampler.mode = lanekit::SampleMode::kUniform;
  else if (a.mode == "focusing")
    sampler.mode = lanekit::SampleMode::kFocusing;
  else
    throw std::invalid_argument("--mode must be uniform or focusing");

  const std::vector<int> rows = lanekit::anchor_rows(sampler);
  std::string line;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) line += ' ';
    line += std::to_string(rows[i]);
  }
  std::cout << line << "\n";

  if (!a.svg_out.empty()) {
    const lanekit::ImageSpec spec(a.width, a.cut + a.height + 1, a.cut);
    lanekit::write_text_file(a.svg_out, lanekit::render_overlay(demo_lane(spec), rows, spec));
  }
  return kExitOk;
}

struct CoordmapsArgs {
  int w = 0;
  int h = 0;
  std::string out;
};

int run_coordmaps(const CoordmapsArgs& a) {
  const lanekit::CoordMaps maps = lanekit::make_coord_maps(a.w, a.h);
  std::ofstream os(a.out, std::ios::binary);
  if (!os) throw std::invalid_argument("cannot write " + a.out);
  lanekit::write_coord_maps(maps, os);
  return kExitOk;
}

struct LossArgs {
  std::string pred_file;
  std::string gt_file;
  double m = 15.0;
  double alpha = 1.0;
  double beta = 0.5;
  double gamma = 0.5;
  std::string rows_csv;
  std::string mode = "uniform";
  int n = 36;
  int height = 0;
  double base = 10.0;
  int cut = 0;
};

int run_loss(const LossArgs& a) {
  // A bad file argument here is an input error, not a dataset inconsistency.
  auto read_arg = [](const std::string& path) {
    try {
      return lanekit::read_text_file(path);
    } catch (const lanekit::DatasetError& e) {
      throw std::invalid_argument(e.what());
    }
  };
  const auto pred_lanes = lanekit::parse_lane_file(read_arg(a.pred_file)).lanes;
  const auto gt_lanes = lanekit::parse_lane_file(read_arg(a.gt_file)).lanes;
  if (pred_lanes.empty() || gt_lanes.empty())
    throw std::invalid_argument("loss: both files must contain at least one lane");

  std::vector<int> rows;
  if (!a.rows_csv.empty()) {
    rows = parse_int_list(a.rows_csv);
  } else {
    if (a.height <= 0)
      throw std::invalid_argument("loss: give --rows or a sampler (--height, --mode, ...)");
    lanekit::RowSampler sampler;
    sampler.n_sample = a.n;
    sampler.height = a.height;
    sampler.base = a.base;
    sampler.mode = a.mode == "focusing" ? lanekit::SampleMode::kFocusing
                                        : lanekit::SampleMode::kUniform;
    rows = lanekit::anchor_rows(sampler);
    for (int& r : rows) r += a.cut;  // sampler anchors are in the cropped frame
  }

  const lanekit::SampledLane pred = lanekit::sample_lane_at_rows(pred_lanes[0], rows);
  const lanekit::SampledLane tgt = lanekit::sample_lane_at_rows(gt_lanes[0], rows);
  const lanekit::ExpansionConfig cfg{a.m};
  const lanekit::DIoUCoefficients k{a.alpha, a.beta, a.gamma};

  lanekit::ordered_json j;
  j["p_iou"] = lanekit::p_iou(pred, tgt, cfg);
  j["dl_iou"] = lanekit::dl_iou(pred, tgt, cfg);
  j["dr_iou"] = lanekit::dr_iou(pred, tgt, cfg);
  j["d_iou_loss"] = lanekit::d_iou_loss(pred, tgt, cfg, k);
  j["grad"] = lanekit::d_iou_grad(pred, tgt, cfg, k);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

struct GenSynthArgs {
  std::uint64_t seed = 1;
  int images = 100;
  double perturb = 0.0;
  std::string out_dir;
  int lanes_min = 2;
  int lanes_max = 4;
  double curvature = 60.0;
  int img_w = 1640;
  int img_h = 590;
  int cut_height = 270;
};

int run_gen_synth(const GenSynthArgs& a) {
  lanekit::SynthConfig cfg;
  cfg.seed = a.seed;
  cfg.n_images = a.images;
  cfg.perturbation_px = a.perturb;
  cfg.lanes_min = a.lanes_min;
  cfg.lanes_max = a.lanes_max;
  cfg.curvature_max_px = a.curvature;
  cfg.spec = lanekit::ImageSpec(a.img_w, a.img_h, a.cut_height);
  const auto [gt, pred] = lanekit::gen_synthetic(cfg, a.out_dir);
  std::cout << "wrote " << gt.records.size() << " image pairs under " << a.out_dir << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string gt_root;
  std::string pred_root;
  std::string list;
  std::vector<std::string> category_lists;
  std::string no_lane_csv;
  int width = 30;
  int img_w = 1640;
  int img_h = 590;
  int cut_height = 270;
  std::string fov_csv = "1";
  std::string out;
  std::string csv;
  int workers = 1;
};

int run_eval(const EvalArgs& a) {
  std::vector<std::pair<std::string, std::filesystem::path>> category_lists;
  for (const std::string& spec : a.category_lists) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--category-lists entries must look like name=path");
    category_lists.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
  }
  std::set<std::string> no_lane;
  {
    std::stringstream ss(a.no_lane_csv);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) no_lane.insert(item);
  }

  const lanekit::DatasetIndex gt = lanekit::scan_dataset(a.gt_root, a.list, category_lists, no_lane);
  const lanekit::DatasetIndex pred = lanekit::scan_dataset(a.pred_root, a.list, category_lists);
  int skipped = 0;
  const std::vector<lanekit::ImageEval> images = lanekit::load_image_evals(pred, gt, &skipped);
  if (skipped > 0) std::cerr << "warning: skipped " << skipped << " short lane lines\n";

  lanekit::EvalConfig cfg(lanekit::ImageSpec(a.img_w, a.img_h, a.cut_height), a.width);
  const std::vector<double> fractions = parse_double_list(a.fov_csv);
  const auto reports = lanekit::evaluate_fov(images, cfg, fractions, no_lane, a.workers);

  write_or_print(a.out, lanekit::fov_reports_to_json(reports, cfg).dump(2) + "\n");
  if (!a.csv.empty()) lanekit::write_text_file(a.csv, lanekit::reports_to_csv(reports));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lane detection metrics toolkit"};
  app.require_subcommand(1);

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "emit row anchors, optionally with an SVG overlay");
  sample->add_option("--n", sample_args.n, "number of sample points")->capture_default_str();
  sample->add_option("--height", sample_args.height, "cropped region height in px")->required();
  sample->add_option("--base", sample_args.base, "focusing log base")->capture_default_str();
  sample->add_option("--mode", sample_args.mode, "uniform or focusing")->capture_default_str();
  sample->add_option("--width", sample_args.width, "image width for the SVG")->capture_default_str();
  sample->add_option("--cut", sample_args.cut, "cut height for the SVG")->capture_default_str();
  sample->add_option("--svg-out", sample_args.svg_out, "write an anchor overlay SVG here");

  CoordmapsArgs coord_args;
  auto* coordmaps = app.add_subcommand("coordmaps", "write normalized coordinate maps (CMAP binary)");
  coordmaps->set_help_flag("--help", "print this help message and exit");  // frees -h for --h
  coordmaps->add_option("--w", coord_args.w, "map width")->required();
  coordmaps->add_option("--h", coord_args.h, "map height")->required();
  coordmaps->add_option("--out", coord_args.out, "output file")->required();

  LossArgs loss_args;
  auto* loss = app.add_subcommand("loss", "directional-IoU losses between two lane files");
  loss->add_option("pred", loss_args.pred_file, "prediction lane file")->required();
  loss->add_option("gt", loss_args.gt_file, "ground-truth lane file")->required();
  loss->add_option("--m", loss_args.m, "pixel expansion amount")->capture_default_str();
  loss->add_option("--alpha", loss_args.alpha, "positional coefficient")->capture_default_str();
  loss->add_option("--beta", loss_args.beta, "left-directional coefficient")->capture_default_str();
  loss->add_option("--gamma", loss_args.gamma, "right-directional coefficient")->capture_default_str();
  loss->add_option("--rows", loss_args.rows_csv, "comma-separated row anchors (image frame)");
  loss->add_option("--mode", loss_args.mode, "sampler mode when --rows is absent")->capture_default_str();
  loss->add_option("--n", loss_args.n, "sampler point count")->capture_default_str();
  loss->add_option("--height", loss_args.height, "sampler cropped height");
  loss->add_option("--base", loss_args.base, "sampler focusing base")->capture_default_str();
  loss->add_option("--cut", loss_args.cut, "cut height added to sampler anchors")->capture_default_str();

  GenSynthArgs gen_args;
  auto* gen = app.add_subcommand("gen-synth", "generate a deterministic synthetic dataset");
  gen->add_option("--seed", gen_args.seed, "RNG seed")->capture_default_str();
  gen->add_option("--images", gen_args.images, "number of images")->required();
  gen->add_option("--perturb", gen_args.perturb, "per-point prediction noise in px")->capture_default_str();
  gen->add_option("--out-dir", gen_args.out_dir, "output directory")->required();
  gen->add_option("--lanes-min", gen_args.lanes_min, "min lanes per image")->capture_default_str();
  gen->add_option("--lanes-max", gen_args.lanes_max, "max lanes per image")->capture_default_str();
  gen->add_option("--curvature", gen_args.curvature, "max lateral bow in px")->capture_default_str();
  gen->add_option("--img-w", gen_args.img_w, "image width")->capture_default_str();
  gen->add_option("--img-h", gen_args.img_h, "image height")->capture_default_str();
  gen->add_option("--cut-height", gen_args.cut_height, "cut height")->capture_default_str();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate predictions against ground truth");
  eval->add_option("--gt-root", eval_args.gt_root, "ground-truth root")->required();
  eval->add_option("--pred-root", eval_args.pred_root, "prediction root")->required();
  eval->add_option("--list", eval_args.list, "image list file")->required();
  eval->add_option("--category-lists", eval_args.category_lists, "name=path pairs");
  eval->add_option("--no-lane-categories", eval_args.no_lane_csv,
                   "comma-separated categories scored by FP count only");
  eval->add_option("--width", eval_args.width, "lane stroke width in px")->capture_default_str();
  eval->add_option("--img-w", eval_args.img_w, "image width")->capture_default_str();
  eval->add_option("--img-h", eval_args.img_h, "image height")->capture_default_str();
  eval->add_option("--cut-height", eval_args.cut_height, "cut height")->capture_default_str();
  eval->add_option("--fov", eval_args.fov_csv, "comma-separated view fractions")->capture_default_str();
  eval->add_option("--out", eval_args.out, "JSON report path (stdout when absent)");
  eval->add_option("--csv", eval_args.csv, "per-category CSV path");
  eval->add_option("--workers", eval_args.workers, "worker threads (LANEKIT_THREADS caps this)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (sample->parsed()) return run_sample(sample_args);
    if (coordmaps->parsed()) return run_coordmaps(coord_args);
    if (loss->parsed()) return run_loss(loss_args);
    if (gen->parsed()) return run_gen_synth(gen_args);
    if (eval->parsed()) return run_eval(eval_args);
  } catch (const lanekit::DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return kExitDataset;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
