#include "lanekit/fov.hpp"

#include <gtest/gtest.h>

#include <random>

#include "lanekit/report_json.hpp"
#include "oracles.hpp"

using lanekit::EvalConfig;
using lanekit::FovWindow;
using lanekit::ImageEval;
using lanekit::ImageSpec;
using lanekit::Lane;
using lanekit::MetricsReport;
using lanekit::clip_lane;
using lanekit::fov_window;

namespace {

const ImageSpec kCulane(1640, 590, 270);

}  // namespace

TEST(FovWindowTest, ConventionalFractions) {
  EXPECT_EQ(fov_window(kCulane, 1.0), (FovWindow{270, 590, 1.0}));
  EXPECT_EQ(fov_window(kCulane, 0.5), (FovWindow{270, 430, 0.5}));
  EXPECT_EQ(fov_window(kCulane, 1.0 / 3.0), (FovWindow{270, 376, 1.0 / 3.0}));
}

TEST(FovWindowTest, RejectsFractionOutsideUnitInterval) {
  EXPECT_THROW(fov_window(kCulane, 0.0), std::invalid_argument);
  EXPECT_THROW(fov_window(kCulane, -0.25), std::invalid_argument);
  EXPECT_THROW(fov_window(kCulane, 1.25), std::invalid_argument);
}

TEST(FovWindowTest, MonotoneNesting) {
  const FovWindow third = fov_window(kCulane, 1.0 / 3.0);
  const FovWindow half = fov_window(kCulane, 0.5);
  const FovWindow full = fov_window(kCulane, 1.0);
  EXPECT_EQ(third.y_lo, half.y_lo);
  EXPECT_EQ(half.y_lo, full.y_lo);
  EXPECT_LE(third.y_hi, half.y_hi);
  EXPECT_LE(half.y_hi, full.y_hi);
}

TEST(ClipLaneTest, FullyInsideIsUnchanged) {
  const FovWindow w = fov_window(kCulane, 0.5);
  const Lane lane({{0, 280}, {10, 420}});
  const auto clipped = clip_lane(lane, w);
  ASSERT_TRUE(clipped.has_value());
  EXPECT_EQ(*clipped, lane);
}

TEST(ClipLaneTest, FullyBelowVanishes) {
  const FovWindow w = fov_window(kCulane, 0.5);
  EXPECT_FALSE(clip_lane(Lane({{0, 500}, {10, 580}}), w).has_value());
}

TEST(ClipLaneTest, InsertsExactBoundaryIntersection) {
  const FovWindow w = fov_window(kCulane, 0.5);  // [270, 430)
  const auto clipped = clip_lane(Lane({{0, 400}, {30, 460}}), w);
  ASSERT_TRUE(clipped.has_value());
  ASSERT_EQ(clipped->size(), 2u);
  EXPECT_EQ(clipped->points()[0], (lanekit::Point{0, 400}));
  EXPECT_DOUBLE_EQ(clipped->points()[1].x, 15.0);  // (430-400)/(460-400) * 30
  EXPECT_DOUBLE_EQ(clipped->points()[1].y, 430.0);
}

TEST(ClipLaneTest, Idempotent) {
  std::mt19937_64 rng(71);
  const FovWindow w = fov_window(kCulane, 0.5);
  for (int trial = 0; trial < 300; ++trial) {
    const Lane lane = oracle::random_lane(rng, 1640, 200.0, 589.0);
    const auto once = clip_lane(lane, w);
    if (!once) continue;
    const auto twice = clip_lane(*once, w);
    ASSERT_TRUE(twice.has_value());
    EXPECT_EQ(*twice, *once);
  }
}

TEST(WindowedMaskTest, EqualsWindowRestrictionOfTheFullMask) {
  std::mt19937_64 rng(73);
  const ImageSpec spec(64, 64, 4);
  EvalConfig full(spec, 12);
  const FovWindow w = fov_window(spec, 0.5);
  EvalConfig windowed = full;
  windowed.window_y_lo = w.y_lo;
  windowed.window_y_hi = w.y_hi;
  for (int trial = 0; trial < 60; ++trial) {
    const Lane lane = oracle::random_lane(rng, 64, 0.0, 63.0);
    const auto clipped = clip_lane(lane, w);
    if (!clipped) continue;
    const lanekit::LaneMask win_mask = lanekit::rasterize_lane(lane, windowed);
    const lanekit::LaneMask full_mask = lanekit::rasterize_lane(*clipped, full);
    std::size_t win_count = 0;
    for (int r = 0; r < win_mask.rows(); ++r)
      for (int c = 0; c < win_mask.width(); ++c) {
        ASSERT_EQ(win_mask.test(r, c), full_mask.test(r + w.y_lo - full.window_y_lo, c));
        win_count += win_mask.test(r, c);
      }
    EXPECT_EQ(win_count, win_mask.count());
  }
}

namespace {

std::vector<ImageEval> synthetic_pair_images() {
  std::mt19937_64 rng(79);
  std::vector<ImageEval> images;
  for (int i = 0; i < 8; ++i) {
    ImageEval img;
    img.id = "img" + std::to_string(i);
    img.category = i % 2 ? "a" : "b";
    for (int k = 0; k < 3; ++k) {
      const Lane gt = oracle::random_lane(rng, 1640, 280.0, 585.0);
      std::vector<lanekit::Point> noisy;
      for (const auto& p : gt.points()) noisy.push_back({p.x + oracle::uniform(rng, -9, 9), p.y});
      img.gts.push_back(gt);
      img.preds.push_back(Lane(noisy));
    }
    images.push_back(std::move(img));
  }
  return images;
}

}  // namespace

TEST(EvaluateFovTest, FractionOneMatchesWholeViewFieldForField) {
  const auto images = synthetic_pair_images();
  const EvalConfig cfg(kCulane, 30);
  const MetricsReport whole = lanekit::evaluate_dataset(images, cfg, {"b"});
  const auto by_fraction = lanekit::evaluate_fov(images, cfg, {1.0}, {"b"});
  ASSERT_EQ(by_fraction.size(), 1u);
  const MetricsReport& fov_full = by_fraction.at(1.0);
  EXPECT_EQ(fov_full, whole);
  EXPECT_EQ(lanekit::report_to_json(fov_full).dump(), lanekit::report_to_json(whole).dump());
}

TEST(EvaluateFovTest, PerfectPredictionsScoreOneOnEveryWindow) {
  auto images = synthetic_pair_images();
  for (ImageEval& img : images) img.preds = img.gts;
  const EvalConfig cfg(kCulane, 30);
  const auto reports = lanekit::evaluate_fov(images, cfg, {1.0, 0.5, 1.0 / 3.0});
  for (const auto& [fraction, report] : reports) EXPECT_DOUBLE_EQ(report.mf1, 1.0);
}

TEST(EvaluateFovTest, SeparatesFarAccurateFromNearDivergent) {
  // Prediction matches ground truth above y = 430 and diverges below, so the
  // top-half view scores a perfect F1@50 while the full view scores zero.
  ImageEval img;
  img.id = "divergent";
  img.gts = {Lane({{100, 270}, {100, 589.5}})};
  img.preds = {Lane({{100, 270}, {100, 430}, {220, 589.5}})};
  const EvalConfig cfg(kCulane, 30);
  const auto reports = lanekit::evaluate_fov({img}, cfg, {1.0, 0.5});
  EXPECT_DOUBLE_EQ(reports.at(0.5).per_threshold[0].f1, 1.0);
  EXPECT_DOUBLE_EQ(reports.at(1.0).per_threshold[0].f1, 0.0);
  EXPECT_LT(lane_iou(lanekit::rasterize_lane(img.preds[0], cfg),
                     lanekit::rasterize_lane(img.gts[0], cfg)),
            0.5);
}

TEST(FovKeyTest, ConventionalNames) {
  EXPECT_EQ(lanekit::fov_key(1.0), "full");
  EXPECT_EQ(lanekit::fov_key(0.5), "top_half");
  EXPECT_EQ(lanekit::fov_key(1.0 / 3.0), "top_third");
  EXPECT_EQ(lanekit::fov_key(0.3333), "top_third");
  EXPECT_EQ(lanekit::fov_key(0.25), "frac_0.2500");
}
