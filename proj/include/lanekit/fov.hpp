#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "lanekit/eval.hpp"
#include "lanekit/lane.hpp"

namespace lanekit {

/// A distal evaluation window: the top `fraction` of the cropped view,
/// always anchored at the cut line. Half-open rows [y_lo, y_hi).
struct FovWindow {
  int y_lo = 0;
  int y_hi = 0;
  double fraction = 1.0;

  friend bool operator==(const FovWindow&, const FovWindow&) = default;
};

/// Window covering the distal `fraction` of the cropped region:
/// y_lo = cut_height, y_hi = cut_height + floor(fraction * cropped_height).
/// Fraction 1 reproduces the whole cropped view.
inline FovWindow fov_window(const ImageSpec& spec, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("fov_window: fraction must lie in (0, 1]");
  const int span = static_cast<int>(std::floor(fraction * spec.cropped_height()));
  if (span < 1) throw std::invalid_argument("fov_window: window is empty at this fraction");
  return {spec.cut_height_px, spec.cut_height_px + span, fraction};
}

/// Restricts a lane to the window, inserting exact boundary intersection
/// points; nothing when the lane leaves fewer than two points inside.
inline std::optional<Lane> clip_lane(const Lane& lane, const FovWindow& window) {
  return clip_lane_y(lane, window.y_lo, window.y_hi);
}

/// Runs evaluate_dataset once per field-of-view fraction, with predictions
/// and ground truths clipped symmetrically to each window (evaluate_dataset
/// clips to its window internally; clipping is idempotent, so pre-clipped
/// lanes pass through unchanged). Keyed by fraction; fraction 1 is
/// bit-identical to whole-view evaluation.
inline std::map<double, MetricsReport> evaluate_fov(const std::vector<ImageEval>& images,
                                                    const EvalConfig& cfg,
                                                    const std::vector<double>& fractions,
                                                    const std::set<std::string>& no_lane_categories = {},
                                                    int workers = 1) {
  if (fractions.empty()) throw std::invalid_argument("evaluate_fov: no fractions given");
  std::map<double, MetricsReport> out;
  for (double f : fractions) {
    const FovWindow w = fov_window(cfg.spec, f);
    EvalConfig windowed = cfg;
    windowed.window_y_lo = w.y_lo;
    windowed.window_y_hi = w.y_hi;
    out[f] = evaluate_dataset(images, windowed, no_lane_categories, workers);
  }
  return out;
}

}  // namespace lanekit
