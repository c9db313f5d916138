#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "lanekit/eval.hpp"

namespace lanekit {

using ordered_json = nlohmann::ordered_json;

namespace detail {

// Reports round to 6 decimals so reruns diff cleanly.
inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

inline std::string threshold_key(double t) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", t);
  return buf;
}

}  // namespace detail

/// Stable view names for the conventional field-of-view fractions.
inline std::string fov_key(double fraction) {
  if (std::abs(fraction - 1.0) < 1e-9) return "full";
  if (std::abs(fraction - 0.5) < 1e-3) return "top_half";
  if (std::abs(fraction - 1.0 / 3.0) < 2e-3) return "top_third";
  char buf[24];
  std::snprintf(buf, sizeof buf, "frac_%.4f", fraction);
  return buf;
}

inline ordered_json report_to_json(const MetricsReport& r) {
  ordered_json j;
  j["images"] = r.n_images;
  j["mf1"] = detail::round6(r.mf1);
  ordered_json per_threshold = ordered_json::object();
  for (std::size_t t = 0; t < r.thresholds.size(); ++t) {
    ordered_json e;
    e["tp"] = r.counts[t].tp;
    e["fp"] = r.counts[t].fp;
    e["fn"] = r.counts[t].fn;
    e["precision"] = detail::round6(r.per_threshold[t].precision);
    e["recall"] = detail::round6(r.per_threshold[t].recall);
    e["f1"] = detail::round6(r.per_threshold[t].f1);
    per_threshold[detail::threshold_key(r.thresholds[t])] = std::move(e);
  }
  j["per_threshold"] = std::move(per_threshold);
  ordered_json cats = ordered_json::object();
  for (const auto& [name, cm] : r.per_category) {
    ordered_json c;
    c["images"] = cm.n_images;
    if (cm.no_lane) {
      c["fp_count"] = cm.fp_count;
    } else {
      c["fp_count"] = cm.fp_count;
      c["mf1"] = detail::round6(cm.mf1);
      ordered_json f1 = ordered_json::object();
      for (std::size_t t = 0; t < r.thresholds.size(); ++t)
        f1[detail::threshold_key(r.thresholds[t])] = detail::round6(cm.per_threshold[t].f1);
      c["f1"] = std::move(f1);
    }
    cats[name] = std::move(c);
  }
  j["categories"] = std::move(cats);
  return j;
}

/// Full evaluation report covering one or more field-of-view windows.
inline ordered_json fov_reports_to_json(const std::map<double, MetricsReport>& reports,
                                        const EvalConfig& cfg) {
  ordered_json j;
  j["image"] = {{"width", cfg.spec.width_px},
                {"height", cfg.spec.height_px},
                {"cut_height", cfg.spec.cut_height_px}};
  j["lane_width_px"] = cfg.lane_width_px;
  ordered_json thr = ordered_json::array();
  for (double t : cfg.iou_thresholds) thr.push_back(detail::round6(t));
  j["thresholds"] = std::move(thr);
  ordered_json views = ordered_json::object();
  // Descending fraction puts the full view first.
  for (auto it = reports.rbegin(); it != reports.rend(); ++it)
    views[fov_key(it->first)] = report_to_json(it->second);
  j["views"] = std::move(views);
  return j;
}

/// Per-category CSV: one row per (view, category) plus an ALL row per view.
/// Both the per-category mF1 and every per-threshold F1 column are emitted.
inline std::string reports_to_csv(const std::map<double, MetricsReport>& reports) {
  std::string csv = "view,category,images,no_lane,fp_count,mf1";
  if (!reports.empty())
    for (double t : reports.rbegin()->second.thresholds)
      csv += ",f1@" + detail::threshold_key(t).substr(2);
  csv += "\n";
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  for (auto it = reports.rbegin(); it != reports.rend(); ++it) {
    const std::string view = fov_key(it->first);
    const MetricsReport& r = it->second;
    csv += view + ",ALL," + std::to_string(r.n_images) + ",0," +
           std::to_string(r.counts.empty() ? 0 : r.counts[0].fp) + "," + num(r.mf1);
    for (const PrfMetrics& m : r.per_threshold) csv += "," + num(m.f1);
    csv += "\n";
    for (const auto& [name, cm] : r.per_category) {
      csv += view + "," + name + "," + std::to_string(cm.n_images) + "," +
             (cm.no_lane ? "1" : "0") + "," + std::to_string(cm.fp_count);
      if (cm.no_lane) {
        csv += ",";
        for (std::size_t t = 0; t < r.thresholds.size(); ++t) csv += ",";
      } else {
        csv += "," + num(cm.mf1);
        for (const PrfMetrics& m : cm.per_threshold) csv += "," + num(m.f1);
      }
      csv += "\n";
    }
  }
  return csv;
}

}  // namespace lanekit
