#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lanekit/eval.hpp"
#include "lanekit/lane.hpp"
#include "lanekit/lane_io.hpp"

namespace lanekit {

/// Deterministic synthetic dataset configuration. Predictions are copies of
/// the ground-truth lanes with independent per-point horizontal noise of the
/// given amplitude.
struct SynthConfig {
  std::uint64_t seed = 1;
  int n_images = 100;
  int lanes_min = 2;
  int lanes_max = 4;
  double curvature_max_px = 60.0;  // lateral bow at the distant end
  double perturbation_px = 0.0;
  ImageSpec spec{1640, 590, 270};

  void validate() const {
    if (n_images < 1) throw std::invalid_argument("SynthConfig: n_images must be positive");
    if (lanes_min < 1 || lanes_max < lanes_min)
      throw std::invalid_argument("SynthConfig: bad lanes-per-image range");
    if (curvature_max_px < 0.0 || perturbation_px < 0.0)
      throw std::invalid_argument("SynthConfig: negative amplitude");
  }
};

struct SynthImage {
  std::string id;
  std::string category;
  std::vector<Lane> gts;
  std::vector<Lane> preds;
};

namespace detail {

// Draws routed through the raw engine output so the value sequence depends
// only on the seed, not on the standard library's distribution internals.
inline double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double next_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * next_unit(rng);
}

inline int next_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace detail

/// Generates the in-memory dataset: smooth quadratic-in-y lanes inside the
/// image, bottom-anchored and bowing sideways by at most curvature_max_px at
/// the distant end. Images whose strongest bow exceeds half the configured
/// maximum land in the "curve" category, the rest in "normal".
inline std::vector<SynthImage> synth_images(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  const double top = static_cast<double>(cfg.spec.cut_height_px);
  const double bottom = static_cast<double>(cfg.spec.height_px - 1);
  const double width = static_cast<double>(cfg.spec.width_px);
  constexpr int kVertices = 25;

  std::vector<SynthImage> images;
  images.reserve(static_cast<std::size_t>(cfg.n_images));
  for (int idx = 0; idx < cfg.n_images; ++idx) {
    SynthImage img;
    char id[32];
    std::snprintf(id, sizeof id, "img_%06d", idx);
    img.id = id;

    const int n_lanes = detail::next_int(rng, cfg.lanes_min, cfg.lanes_max);
    double bow_sum = 0.0;
    for (int k = 0; k < n_lanes; ++k) {
      const double slot = width * (k + 1) / (n_lanes + 1);
      const double x_bottom = slot + detail::next_range(rng, -0.06 * width, 0.06 * width);
      const double slope = detail::next_range(rng, -0.35, 0.35);
      const double bow = detail::next_range(rng, -cfg.curvature_max_px, cfg.curvature_max_px);
      bow_sum += std::abs(bow);
      const double y_start = top + detail::next_range(rng, 0.0, 0.25 * (bottom - top));
      const double y_end = bottom - detail::next_range(rng, 0.0, 0.05 * (bottom - top));
      const double span = y_end - y_start;

      std::vector<Point> gt_pts, pred_pts;
      gt_pts.reserve(kVertices);
      pred_pts.reserve(kVertices);
      for (int j = 0; j < kVertices; ++j) {
        const double y = y_start + span * j / (kVertices - 1);
        const double u = (y - y_end) / span;  // 0 at the bottom, -1 at the top
        double x = x_bottom + slope * (y - y_end) + bow * u * u;
        x = std::clamp(x, 1.0, width - 2.0);
        gt_pts.push_back({x, y});
        double xp = x;
        if (cfg.perturbation_px > 0.0)
          xp = std::clamp(x + detail::next_range(rng, -cfg.perturbation_px, cfg.perturbation_px),
                          1.0, width - 2.0);
        pred_pts.push_back({xp, y});
      }
      img.gts.emplace_back(std::move(gt_pts));
      img.preds.emplace_back(std::move(pred_pts));
    }
    img.category = bow_sum >= 0.5 * cfg.curvature_max_px * n_lanes ? "curve" : "normal";
    images.push_back(std::move(img));
  }
  return images;
}

inline std::vector<ImageEval> synth_image_evals(const SynthConfig& cfg) {
  std::vector<ImageEval> out;
  for (auto& s : synth_images(cfg))
    out.push_back({std::move(s.id), std::move(s.category), std::move(s.preds), std::move(s.gts)});
  return out;
}

/// Writes a generated dataset as a CULane-style tree:
///   out_dir/gt/<id>.lines.txt, out_dir/pred/<id>.lines.txt,
///   out_dir/list.txt and out_dir/lists/<category>.txt.
/// Output is byte-identical for identical inputs.
inline void write_synth_dataset(const std::vector<SynthImage>& images,
                                const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "gt");
  fs::create_directories(out_dir / "pred");
  fs::create_directories(out_dir / "lists");
  std::string list_text;
  std::map<std::string, std::string> category_lists{{"normal", ""}, {"curve", ""}};
  for (const SynthImage& img : images) {
    write_text_file(out_dir / "gt" / (img.id + ".lines.txt"), write_lane_file(img.gts));
    write_text_file(out_dir / "pred" / (img.id + ".lines.txt"), write_lane_file(img.preds));
    list_text += img.id + "\n";
    category_lists[img.category] += img.id + "\n";
  }
  write_text_file(out_dir / "list.txt", list_text);
  for (const auto& [name, text] : category_lists)
    write_text_file(out_dir / "lists" / (name + ".txt"), text);
}

/// Generates, writes and indexes a synthetic dataset; returns the
/// ground-truth and prediction indexes.
inline std::pair<DatasetIndex, DatasetIndex> gen_synthetic(const SynthConfig& cfg,
                                                           const std::filesystem::path& out_dir) {
  const auto images = synth_images(cfg);
  write_synth_dataset(images, out_dir);
  std::vector<std::pair<std::string, std::filesystem::path>> category_lists;
  for (const auto& entry : std::filesystem::directory_iterator(out_dir / "lists"))
    category_lists.emplace_back(entry.path().stem().string(), entry.path());
  std::sort(category_lists.begin(), category_lists.end());
  DatasetIndex gt = scan_dataset(out_dir / "gt", out_dir / "list.txt", category_lists);
  DatasetIndex pred = scan_dataset(out_dir / "pred", out_dir / "list.txt", category_lists);
  return {std::move(gt), std::move(pred)};
}

}  // namespace lanekit
