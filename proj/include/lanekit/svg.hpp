#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "lanekit/lane.hpp"

namespace lanekit {

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

/// Renders a lane polyline with one marker per sampled anchor as an SVG
/// document. `anchor_rows` are in the cropped frame (0 = first row below the
/// cut); markers appear only at anchors the lane actually spans, so the
/// marker count equals the number of anchors inside the lane's y-span.
inline std::string render_overlay(const Lane& lane, const std::vector<int>& anchor_rows,
                                  const ImageSpec& spec) {
  std::vector<int> image_rows;
  image_rows.reserve(anchor_rows.size());
  for (int r : anchor_rows) image_rows.push_back(spec.cut_height_px + r);
  const SampledLane sampled = sample_lane_at_rows(lane, image_rows);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width_px) +
         "\" height=\"" + std::to_string(spec.height_px) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width_px) + " " + std::to_string(spec.height_px) + "\">\n";
  if (spec.cut_height_px > 0) {
    svg += "  <line x1=\"0\" y1=\"" + std::to_string(spec.cut_height_px) + "\" x2=\"" +
           std::to_string(spec.width_px) + "\" y2=\"" + std::to_string(spec.cut_height_px) +
           "\" stroke=\"#999999\" stroke-dasharray=\"8 6\" stroke-width=\"1\"/>\n";
  }
  svg += "  <polyline fill=\"none\" stroke=\"#2266cc\" stroke-width=\"3\" points=\"";
  bool first = true;
  for (const Point& p : lane.points()) {
    if (!first) svg += ' ';
    svg += detail::svg_num(p.x) + "," + detail::svg_num(p.y);
    first = false;
  }
  svg += "\"/>\n";
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    if (!sampled.valid[i]) continue;
    svg += "  <circle cx=\"" + detail::svg_num(sampled.xs[i]) + "\" cy=\"" +
           detail::svg_num(static_cast<double>(sampled.rows[i])) +
           "\" r=\"4\" fill=\"#cc2222\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace lanekit
