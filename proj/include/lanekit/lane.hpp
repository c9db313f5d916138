#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lanekit {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point& a, const Point& b) = default;
};

/// Image geometry shared by sampling, evaluation and IO. `cut_height_px` is
/// the number of top image rows removed by preprocessing cropping; sampling
/// and evaluation only ever look at rows >= cut_height_px.
struct ImageSpec {
  int width_px = 1640;
  int height_px = 590;
  int cut_height_px = 270;

  ImageSpec() = default;
  ImageSpec(int width, int height, int cut_height)
      : width_px(width), height_px(height), cut_height_px(cut_height) {
    if (width_px < 2 || height_px < 2)
      throw std::invalid_argument("ImageSpec: width and height must be >= 2");
    if (cut_height_px < 0 || cut_height_px >= height_px)
      throw std::invalid_argument("ImageSpec: cut height must lie in [0, height)");
  }

  int cropped_height() const { return height_px - cut_height_px; }

  friend bool operator==(const ImageSpec&, const ImageSpec&) = default;
};

/// Ordered polyline of sub-pixel image points, y strictly increasing (top of
/// image = smallest y = most distant road). Construction normalizes raw
/// input: points are sorted by y and points sharing the exact same y collapse
/// to their mean x, so dataset files listed bottom-to-top load fine.
class Lane {
 public:
  explicit Lane(std::vector<Point> raw) {
    for (const Point& p : raw)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument("Lane: non-finite coordinate");
    std::stable_sort(raw.begin(), raw.end(),
                     [](const Point& a, const Point& b) { return a.y < b.y; });
    points_.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size();) {
      std::size_t j = i;
      double sum_x = 0.0;
      while (j < raw.size() && raw[j].y == raw[i].y) sum_x += raw[j++].x;
      points_.push_back({sum_x / static_cast<double>(j - i), raw[i].y});
      i = j;
    }
    if (points_.size() < 2)
      throw std::invalid_argument("Lane: needs at least 2 points with distinct y");
  }

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double min_y() const { return points_.front().y; }
  double max_y() const { return points_.back().y; }

  /// x-position at height y by piecewise-linear interpolation. Exact at
  /// vertices. Caller must keep y within [min_y(), max_y()].
  double x_at(double y) const {
    const auto it = std::lower_bound(
        points_.begin(), points_.end(), y,
        [](const Point& p, double v) { return p.y < v; });
    if (it == points_.end()) return points_.back().x;
    if (it->y == y || it == points_.begin()) return it->x;
    const Point& a = *(it - 1);
    const Point& b = *it;
    const double t = (y - a.y) / (b.y - a.y);
    return a.x + t * (b.x - a.x);
  }

  friend bool operator==(const Lane& a, const Lane& b) { return a.points_ == b.points_; }

 private:
  std::vector<Point> points_;
};

/// Lane positions sampled at a fixed set of integer row anchors.
/// valid[i] is false exactly when the lane does not span rows[i]; the
/// corresponding x is kept at 0 so arithmetic over the arrays stays total.
/// The mask is the single source of truth for validity.
struct SampledLane {
  std::vector<int> rows;
  std::vector<double> xs;
  std::vector<bool> valid;

  SampledLane() = default;
  SampledLane(std::vector<int> rows_in, std::vector<double> xs_in, std::vector<bool> valid_in)
      : rows(std::move(rows_in)), xs(std::move(xs_in)), valid(std::move(valid_in)) {
    if (rows.size() != xs.size() || rows.size() != valid.size())
      throw std::invalid_argument("SampledLane: rows/xs/valid lengths differ");
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i] <= rows[i - 1])
        throw std::invalid_argument("SampledLane: rows must be strictly increasing");
  }

  std::size_t size() const { return rows.size(); }

  friend bool operator==(const SampledLane&, const SampledLane&) = default;
};

/// Samples a lane polyline at the given strictly increasing row anchors.
/// Rows outside the lane's y-span yield valid=false and x=0.
inline SampledLane sample_lane_at_rows(const Lane& lane, const std::vector<int>& rows) {
  std::vector<double> xs(rows.size(), 0.0);
  std::vector<bool> valid(rows.size(), false);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double y = static_cast<double>(rows[i]);
    if (y < lane.min_y() || y > lane.max_y()) continue;
    xs[i] = lane.x_at(y);
    valid[i] = true;
  }
  return SampledLane(rows, std::move(xs), std::move(valid));
}

/// Restricts a lane to y in [y_lo, y_hi], inserting exact intersection points
/// where segments cross the bounds. Returns nothing when fewer than two
/// distinct-y points survive. Idempotent: clipping a clipped lane again with
/// the same bounds returns the identical polyline.
inline std::optional<Lane> clip_lane_y(const Lane& lane, double y_lo, double y_hi) {
  if (!(y_lo < y_hi)) throw std::invalid_argument("clip_lane_y: empty y range");
  const auto& pts = lane.points();
  std::vector<Point> out;
  out.reserve(pts.size() + 2);
  auto cross_at = [](const Point& a, const Point& b, double y) -> Point {
    const double t = (y - a.y) / (b.y - a.y);
    return {a.x + t * (b.x - a.x), y};
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) {
      const Point& a = pts[i - 1];
      const Point& b = pts[i];
      if (a.y < y_lo && b.y > y_lo) out.push_back(cross_at(a, b, y_lo));
      if (a.y < y_hi && b.y > y_hi) out.push_back(cross_at(a, b, y_hi));
    }
    if (pts[i].y >= y_lo && pts[i].y <= y_hi) out.push_back(pts[i]);
  }
  if (out.size() < 2) return std::nullopt;
  try {
    return Lane(std::move(out));
  } catch (const std::invalid_argument&) {
    return std::nullopt;  // collapsed to a single distinct y
  }
}

}  // namespace lanekit
