#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lanekit/lane.hpp"

namespace lanekit {

/// Pixel expansion amount applied on both sides of every sampled point.
struct ExpansionConfig {
  double m = 15.0;

  void validate() const {
    if (!(m > 0.0)) throw std::invalid_argument("ExpansionConfig: m must be positive");
  }
};

/// Weights of the positional and the two directional terms in the combined
/// directional-IoU loss.
struct DIoUCoefficients {
  double alpha = 1.0;
  double beta = 0.5;
  double gamma = 0.5;

  void validate() const {
    if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
      throw std::invalid_argument("DIoUCoefficients: coefficients must be non-negative");
    if (!(alpha + beta + gamma > 0.0))
      throw std::invalid_argument("DIoUCoefficients: at least one coefficient must be positive");
  }
};

/// Weights of the total-loss combination. w_iou multiplies the positional
/// term in the v1 total and the directional-IoU term in the v2 total.
struct LossWeights {
  double w_iou = 1.0;
  double w_cls = 1.0;
  double w_xytl = 1.0;
  double w_se = 1.0;
};

/// Scalar loss components entering a total-loss combination. `iou` holds the
/// positional-IoU loss for the v1 total and the directional-IoU loss for v2.
struct LossComponents {
  double iou = 0.0;
  double cls = 0.0;
  double xytl = 0.0;
  double se = 0.0;
};

namespace detail {

/// Indices where both lanes are valid. Requires identical row anchors and at
/// least one jointly valid row; silent empty overlaps hide matching bugs
/// upstream, so they are an error rather than a zero.
inline std::vector<std::size_t> joint_valid_rows(const SampledLane& pred, const SampledLane& tgt) {
  if (pred.rows != tgt.rows)
    throw std::invalid_argument("loss: prediction and target row anchors differ");
  std::vector<std::size_t> idx;
  idx.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred.valid[i] && tgt.valid[i]) idx.push_back(i);
  if (idx.empty()) throw std::invalid_argument("loss: no jointly valid rows");
  return idx;
}

}  // namespace detail

/// Per-point directional terms. DL penalizes only rightward deviation of the
/// prediction, DR only leftward; both are 1 on their unpenalized side and
/// fall off linearly at rate 1/m, unclamped below.
inline double dl_iou_point(double x_pred, double x_target, double m) {
  return (x_target - std::max(x_pred - m, x_target - m)) / m;
}

inline double dr_iou_point(double x_pred, double x_target, double m) {
  return (std::min(x_pred + m, x_target + m) - x_target) / m;
}

/// Positional line IoU over jointly valid rows: with delta_i the absolute
/// x-difference at row i, returns sum(2m - delta) / sum(2m + delta). At most
/// 1, equal to 1 iff the lanes coincide; negative once points drift apart by
/// more than 2m (signed non-overlap extension).
inline double p_iou(const SampledLane& pred, const SampledLane& tgt, const ExpansionConfig& cfg) {
  cfg.validate();
  const auto idx = detail::joint_valid_rows(pred, tgt);
  double num = 0.0, den = 0.0;
  for (std::size_t i : idx) {
    const double delta = std::abs(pred.xs[i] - tgt.xs[i]);
    num += 2.0 * cfg.m - delta;
    den += 2.0 * cfg.m + delta;
  }
  return num / den;
}

/// Mean of the per-point DL terms over jointly valid rows.
inline double dl_iou(const SampledLane& pred, const SampledLane& tgt, const ExpansionConfig& cfg) {
  cfg.validate();
  const auto idx = detail::joint_valid_rows(pred, tgt);
  double sum = 0.0;
  for (std::size_t i : idx) sum += dl_iou_point(pred.xs[i], tgt.xs[i], cfg.m);
  return sum / static_cast<double>(idx.size());
}

/// Mean of the per-point DR terms over jointly valid rows.
inline double dr_iou(const SampledLane& pred, const SampledLane& tgt, const ExpansionConfig& cfg) {
  cfg.validate();
  const auto idx = detail::joint_valid_rows(pred, tgt);
  double sum = 0.0;
  for (std::size_t i : idx) sum += dr_iou_point(pred.xs[i], tgt.xs[i], cfg.m);
  return sum / static_cast<double>(idx.size());
}

/// Combined directional-IoU loss
///   alpha (1 - P_IoU) + beta (1 - DL_IoU) + gamma (1 - DR_IoU);
/// zero iff the lanes coincide on all jointly valid rows (for positive
/// coefficients), non-negative while every |delta| <= 2m.
inline double d_iou_loss(const SampledLane& pred, const SampledLane& tgt,
                         const ExpansionConfig& cfg, const DIoUCoefficients& k) {
  k.validate();
  return k.alpha * (1.0 - p_iou(pred, tgt, cfg)) + k.beta * (1.0 - dl_iou(pred, tgt, cfg)) +
         k.gamma * (1.0 - dr_iou(pred, tgt, cfg));
}

/// Exact partial derivatives of d_iou_loss with respect to each predicted
/// x-position; entries at rows that are not jointly valid are zero. At the
/// delta = 0 kink the right-hand derivative is taken.
inline std::vector<double> d_iou_grad(const SampledLane& pred, const SampledLane& tgt,
                                      const ExpansionConfig& cfg, const DIoUCoefficients& k) {
  cfg.validate();
  k.validate();
  const auto idx = detail::joint_valid_rows(pred, tgt);
  const double m = cfg.m;
  double den = 0.0;
  for (std::size_t i : idx) den += 2.0 * m + std::abs(pred.xs[i] - tgt.xs[i]);

  // d/dx_i of sum(2m - d)/sum(2m + d) is -(num + den)/den^2 * sign_i, and
  // num + den telescopes to 4mK over the K jointly valid rows.
  const double joint = static_cast<double>(idx.size());
  const double p_slope = 4.0 * m * joint / (den * den);

  std::vector<double> grad(pred.size(), 0.0);
  for (std::size_t i : idx) {
    const bool right_of_target = pred.xs[i] >= tgt.xs[i];
    const double sign = right_of_target ? 1.0 : -1.0;
    double g = k.alpha * p_slope * sign;
    if (right_of_target)
      g += k.beta / (m * joint);   // DL averages K points, falling at rate 1/m; DR is flat
    else
      g -= k.gamma / (m * joint);  // DR falls; DL is flat at 1
    grad[i] = g;
  }
  return grad;
}

/// Total training loss, positional variant:
/// w_iou * L_piou + w_cls * L_cls + w_xytl * L_xytl + w_se * L_se.
inline double total_loss_v1(const LossComponents& c, const LossWeights& w) {
  return w.w_iou * c.iou + w.w_cls * c.cls + w.w_xytl * c.xytl + w.w_se * c.se;
}

/// Total training loss, directional variant; identical combination with the
/// directional-IoU loss in the iou slot.
inline double total_loss_v2(const LossComponents& c, const LossWeights& w) {
  return w.w_iou * c.iou + w.w_cls * c.cls + w.w_xytl * c.xytl + w.w_se * c.se;
}

}  // namespace lanekit
