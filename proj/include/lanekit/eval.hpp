#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lanekit/assignment.hpp"
#include "lanekit/lane.hpp"

namespace lanekit {

inline std::vector<double> default_iou_thresholds() {
  return {0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
}

/// Evaluation configuration. Masks and matching are restricted to the row
/// window [window_y_lo, window_y_hi), which defaults to the whole cropped
/// view [cut_height, height).
struct EvalConfig {
  ImageSpec spec;
  int lane_width_px = 30;
  std::vector<double> iou_thresholds = default_iou_thresholds();
  int window_y_lo = 0;
  int window_y_hi = 0;

  EvalConfig() : EvalConfig(ImageSpec{}) {}
  explicit EvalConfig(const ImageSpec& image_spec, int lane_width = 30)
      : spec(image_spec),
        lane_width_px(lane_width),
        window_y_lo(image_spec.cut_height_px),
        window_y_hi(image_spec.height_px) {}

  void validate() const {
    if (lane_width_px < 1) throw std::invalid_argument("EvalConfig: lane width must be positive");
    if (iou_thresholds.empty()) throw std::invalid_argument("EvalConfig: no IoU thresholds");
    for (std::size_t i = 0; i < iou_thresholds.size(); ++i) {
      if (!(iou_thresholds[i] > 0.0 && iou_thresholds[i] < 1.0))
        throw std::invalid_argument("EvalConfig: thresholds must lie in (0, 1)");
      if (i > 0 && !(iou_thresholds[i] > iou_thresholds[i - 1]))
        throw std::invalid_argument("EvalConfig: thresholds must be strictly increasing");
    }
    if (window_y_lo < spec.cut_height_px || window_y_lo >= window_y_hi ||
        window_y_hi > spec.height_px)
      throw std::invalid_argument("EvalConfig: window outside the cropped view");
  }
};

/// Bit mask over the evaluation window. Pixel (row r, col c) covers the unit
/// square [c, c+1) x [y_lo+r, y_lo+r+1); its center sits at
/// (c + 0.5, y_lo + r + 0.5) in image coordinates.
class LaneMask {
 public:
  LaneMask(int width, int y_lo, int y_hi)
      : width_(width),
        y_lo_(y_lo),
        n_rows_(y_hi - y_lo),
        words_per_row_((width + 63) / 64),
        bits_(static_cast<std::size_t>(words_per_row_) * n_rows_, 0) {
    if (width < 1 || y_hi <= y_lo) throw std::invalid_argument("LaneMask: empty window");
  }

  int width() const { return width_; }
  int rows() const { return n_rows_; }
  int y_lo() const { return y_lo_; }

  bool test(int row, int col) const {
    const std::uint64_t w = word(row, col / 64);
    return (w >> (col % 64)) & 1u;
  }

  /// Sets the inclusive column range [c0, c1] on a row, clamped to the mask.
  void set_span(int row, int c0, int c1) {
    c0 = std::max(c0, 0);
    c1 = std::min(c1, width_ - 1);
    if (c0 > c1 || row < 0 || row >= n_rows_) return;
    std::uint64_t* base = bits_.data() + static_cast<std::size_t>(row) * words_per_row_;
    const int w0 = c0 / 64, w1 = c1 / 64;
    const std::uint64_t first = ~std::uint64_t{0} << (c0 % 64);
    const std::uint64_t last = ~std::uint64_t{0} >> (63 - c1 % 64);
    if (w0 == w1) {
      base[w0] |= first & last;
    } else {
      base[w0] |= first;
      for (int w = w0 + 1; w < w1; ++w) base[w] = ~std::uint64_t{0};
      base[w1] |= last;
    }
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (std::uint64_t w : bits_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  /// |a n b| / |a u b|; two empty masks give 0 by convention.
  friend double lane_iou(const LaneMask& a, const LaneMask& b) {
    if (a.width_ != b.width_ || a.n_rows_ != b.n_rows_)
      throw std::invalid_argument("lane_iou: mask dimensions differ");
    std::size_t inter = 0, uni = 0;
    for (std::size_t w = 0; w < a.bits_.size(); ++w) {
      inter += static_cast<std::size_t>(std::popcount(a.bits_[w] & b.bits_[w]));
      uni += static_cast<std::size_t>(std::popcount(a.bits_[w] | b.bits_[w]));
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
  }

  friend bool operator==(const LaneMask&, const LaneMask&) = default;

 private:
  std::uint64_t word(int row, int w) const {
    return bits_[static_cast<std::size_t>(row) * words_per_row_ + w];
  }

  int width_;
  int y_lo_;
  int n_rows_;
  int words_per_row_;
  std::vector<std::uint64_t> bits_;
};

namespace detail {

struct XInterval {
  double lo = 1.0;
  double hi = 0.0;
  bool empty() const { return lo > hi; }
  void merge(double lo_in, double hi_in) {
    if (lo_in > hi_in) return;
    if (empty()) {
      lo = lo_in;
      hi = hi_in;
    } else {
      lo = std::min(lo, lo_in);
      hi = std::max(hi, hi_in);
    }
  }
};

// One scanline of a stroked segment: {x : dist((x, yc), segment) <= r} is the
// intersection of a horizontal line with a capsule, hence a single interval.
// Assembled from the two end-cap discs and the body slab between the
// perpendiculars at the endpoints. Requires p1.y < p2.y (Lane invariant).
inline XInterval stroke_row_interval(const Point& p1, const Point& p2, double yc, double r) {
  XInterval out;
  for (const Point& p : {p1, p2}) {
    const double d = yc - p.y;
    if (std::abs(d) <= r) {
      const double h = std::sqrt(r * r - d * d);
      out.merge(p.x - h, p.x + h);
    }
  }
  const double dx = p2.x - p1.x;
  const double dy = p2.y - p1.y;
  const double len2 = dx * dx + dy * dy;
  const double len = std::sqrt(len2);
  // band around the infinite line: |dx (yc - y1) - dy (x - x1)| <= r len
  const double c = dx * (yc - p1.y);
  double body_lo = p1.x + (c - r * len) / dy;
  double body_hi = p1.x + (c + r * len) / dy;
  // projection constraint t = (dx (x - x1) + dy (yc - y1)) / len2 in [0, 1]
  const double k = dy * (yc - p1.y);
  if (dx > 0.0) {
    body_lo = std::max(body_lo, p1.x - k / dx);
    body_hi = std::min(body_hi, p1.x + (len2 - k) / dx);
  } else if (dx < 0.0) {
    body_lo = std::max(body_lo, p1.x + (len2 - k) / dx);
    body_hi = std::min(body_hi, p1.x - k / dx);
  } else if (k < 0.0 || k > len2) {
    return out;  // scanline is beyond the segment's y-span; caps only
  }
  out.merge(body_lo, body_hi);
  return out;
}

}  // namespace detail

/// Rasterizes the lane, clipped to the window, as a stroke of width
/// lane_width_px: a pixel is set iff its center lies within Euclidean
/// distance lane_width_px / 2 of the clipped polyline. A lane entirely
/// outside the window yields an empty mask.
inline LaneMask rasterize_lane(const Lane& lane, const EvalConfig& cfg) {
  cfg.validate();
  LaneMask mask(cfg.spec.width_px, cfg.window_y_lo, cfg.window_y_hi);
  const auto clipped = clip_lane_y(lane, cfg.window_y_lo, cfg.window_y_hi);
  if (!clipped) return mask;

  const double r = cfg.lane_width_px / 2.0;
  const auto& pts = clipped->points();
  for (std::size_t s = 1; s < pts.size(); ++s) {
    const Point& a = pts[s - 1];
    const Point& b = pts[s];
    const int row_first =
        std::max(0, static_cast<int>(std::floor(a.y - r - 0.5)) - cfg.window_y_lo);
    const int row_last =
        std::min(mask.rows() - 1, static_cast<int>(std::ceil(b.y + r - 0.5)) - cfg.window_y_lo);
    for (int row = row_first; row <= row_last; ++row) {
      const double yc = cfg.window_y_lo + row + 0.5;
      const auto iv = detail::stroke_row_interval(a, b, yc, r);
      if (iv.empty()) continue;
      const int c0 = static_cast<int>(std::ceil(iv.lo - 0.5));
      const int c1 = static_cast<int>(std::floor(iv.hi - 0.5));
      mask.set_span(row, c0, c1);
    }
  }
  return mask;
}

struct MatchPair {
  int pred = -1;
  int gt = -1;
  double iou = 0.0;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct MatchResult {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  std::vector<MatchPair> pairs;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// Optimal matching of a precomputed IoU matrix (rows = predictions,
/// columns = ground truths): maximizes the summed IoU over pairs at or above
/// the threshold. Unmatched predictions count as false positives, unmatched
/// ground truths as false negatives.
inline MatchResult match_from_iou(const std::vector<std::vector<double>>& iou, double threshold,
                                  std::size_t n_preds, std::size_t n_gts) {
  MatchResult res;
  const auto row_to_col = max_score_assignment(iou, threshold);
  for (std::size_t p = 0; p < row_to_col.size(); ++p)
    if (row_to_col[p] >= 0)
      res.pairs.push_back({static_cast<int>(p), row_to_col[p], iou[p][static_cast<std::size_t>(row_to_col[p])]});
  res.tp = static_cast<long>(res.pairs.size());
  res.fp = static_cast<long>(n_preds) - res.tp;
  res.fn = static_cast<long>(n_gts) - res.tp;
  return res;
}

inline std::vector<std::vector<double>> lane_iou_matrix(const std::vector<Lane>& preds,
                                                        const std::vector<Lane>& gts,
                                                        const EvalConfig& cfg) {
  std::vector<LaneMask> gt_masks;
  gt_masks.reserve(gts.size());
  for (const Lane& g : gts) gt_masks.push_back(rasterize_lane(g, cfg));
  std::vector<std::vector<double>> iou(preds.size(), std::vector<double>(gts.size(), 0.0));
  for (std::size_t p = 0; p < preds.size(); ++p) {
    const LaneMask pm = rasterize_lane(preds[p], cfg);
    for (std::size_t g = 0; g < gts.size(); ++g) iou[p][g] = lane_iou(pm, gt_masks[g]);
  }
  return iou;
}

/// Rasterizes both lane sets over the window and matches them optimally at
/// the given IoU threshold.
inline MatchResult match_lanes(const std::vector<Lane>& preds, const std::vector<Lane>& gts,
                               const EvalConfig& cfg, double threshold) {
  cfg.validate();
  return match_from_iou(lane_iou_matrix(preds, gts, cfg), threshold, preds.size(), gts.size());
}

struct PrfMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const PrfMetrics&, const PrfMetrics&) = default;
};

/// Precision, recall and the F1 harmonic mean, with every 0/0 defined as 0.
inline PrfMetrics f1_from_counts(long tp, long fp, long fn) {
  if (tp < 0 || fp < 0 || fn < 0)
    throw std::invalid_argument("f1_from_counts: negative count");
  PrfMetrics m;
  m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

struct ThresholdCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  friend bool operator==(const ThresholdCounts&, const ThresholdCounts&) = default;
};

struct CategoryMetrics {
  bool no_lane = false;
  long n_images = 0;
  long fp_count = 0;  // false positives at the first threshold
  double mf1 = 0.0;
  std::vector<PrfMetrics> per_threshold;  // empty for no-lane categories

  friend bool operator==(const CategoryMetrics&, const CategoryMetrics&) = default;
};

struct MetricsReport {
  std::vector<double> thresholds;
  std::vector<ThresholdCounts> counts;
  std::vector<PrfMetrics> per_threshold;
  double mf1 = 0.0;
  long n_images = 0;
  std::map<std::string, CategoryMetrics> per_category;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// One annotated image: predictions and ground truths in image coordinates.
struct ImageEval {
  std::string id;
  std::string category;  // empty = uncategorized, counted in totals only
  std::vector<Lane> preds;
  std::vector<Lane> gts;
};

namespace detail {

inline int env_thread_cap() {
  if (const char* s = std::getenv("LANEKIT_THREADS")) {
    const int v = std::atoi(s);
    if (v > 0) return v;
  }
  return 0;
}

inline int effective_workers(int requested) {
  int w = std::max(1, requested);
  if (const int cap = env_thread_cap(); cap > 0) w = std::min(w, cap);
  return w;
}

// Per-image evaluation: clip both sides to the window (dropping lanes that
// degenerate, so partial-view and whole-view evaluations share one code
// path), rasterize once, then match at every threshold.
inline std::vector<ThresholdCounts> evaluate_image(const ImageEval& img, const EvalConfig& cfg) {
  std::vector<Lane> preds, gts;
  preds.reserve(img.preds.size());
  gts.reserve(img.gts.size());
  for (const Lane& l : img.preds)
    if (auto c = clip_lane_y(l, cfg.window_y_lo, cfg.window_y_hi)) preds.push_back(std::move(*c));
  for (const Lane& l : img.gts)
    if (auto c = clip_lane_y(l, cfg.window_y_lo, cfg.window_y_hi)) gts.push_back(std::move(*c));

  const auto iou = lane_iou_matrix(preds, gts, cfg);
  std::vector<ThresholdCounts> out(cfg.iou_thresholds.size());
  for (std::size_t t = 0; t < cfg.iou_thresholds.size(); ++t) {
    const MatchResult m = match_from_iou(iou, cfg.iou_thresholds[t], preds.size(), gts.size());
    out[t] = {m.tp, m.fp, m.fn};
  }
  return out;
}

}  // namespace detail

/// Accumulates per-threshold counts over all images (matching per image) and
/// reports per-threshold precision/recall/F1, their mean mF1, and the
/// per-category breakdown. Categories named in `no_lane_categories` report a
/// false-positive count instead of F1 figures. Counts from every image,
/// including no-lane categories, enter the overall totals.
///
/// Images are independent, so `workers` threads may process them
/// concurrently; per-image counts are merged in image order, making the
/// report bit-identical for any worker count. The LANEKIT_THREADS
/// environment variable caps the worker count.
inline MetricsReport evaluate_dataset(const std::vector<ImageEval>& images, const EvalConfig& cfg,
                                      const std::set<std::string>& no_lane_categories = {},
                                      int workers = 1) {
  cfg.validate();
  const std::size_t n = images.size();
  std::vector<std::vector<ThresholdCounts>> per_image(n);

  const int n_workers =
      std::min(detail::effective_workers(workers), static_cast<int>(std::max<std::size_t>(n, 1)));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) per_image[i] = detail::evaluate_image(images[i], cfg);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          per_image[i] = detail::evaluate_image(images[i], cfg);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  const std::size_t n_thr = cfg.iou_thresholds.size();
  MetricsReport report;
  report.thresholds = cfg.iou_thresholds;
  report.counts.assign(n_thr, {});
  report.n_images = static_cast<long>(n);

  std::map<std::string, std::vector<ThresholdCounts>> by_category;
  std::map<std::string, long> category_images;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < n_thr; ++t) {
      report.counts[t].tp += per_image[i][t].tp;
      report.counts[t].fp += per_image[i][t].fp;
      report.counts[t].fn += per_image[i][t].fn;
    }
    const std::string& cat = images[i].category;
    if (cat.empty()) continue;
    auto& acc = by_category[cat];
    if (acc.empty()) acc.assign(n_thr, {});
    for (std::size_t t = 0; t < n_thr; ++t) {
      acc[t].tp += per_image[i][t].tp;
      acc[t].fp += per_image[i][t].fp;
      acc[t].fn += per_image[i][t].fn;
    }
    ++category_images[cat];
  }

  double f1_sum = 0.0;
  report.per_threshold.resize(n_thr);
  for (std::size_t t = 0; t < n_thr; ++t) {
    report.per_threshold[t] = f1_from_counts(report.counts[t].tp, report.counts[t].fp,
                                             report.counts[t].fn);
    f1_sum += report.per_threshold[t].f1;
  }
  report.mf1 = f1_sum / static_cast<double>(n_thr);

  for (const auto& [cat, acc] : by_category) {
    CategoryMetrics cm;
    cm.n_images = category_images[cat];
    cm.fp_count = acc[0].fp;
    cm.no_lane = no_lane_categories.count(cat) > 0;
    if (!cm.no_lane) {
      cm.per_threshold.resize(n_thr);
      double sum = 0.0;
      for (std::size_t t = 0; t < n_thr; ++t) {
        cm.per_threshold[t] = f1_from_counts(acc[t].tp, acc[t].fp, acc[t].fn);
        sum += cm.per_threshold[t].f1;
      }
      cm.mf1 = sum / static_cast<double>(n_thr);
    }
    report.per_category.emplace(cat, std::move(cm));
  }
  return report;
}

}  // namespace lanekit
