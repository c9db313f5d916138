#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lanekit {

enum class SampleMode { kUniform, kFocusing };

/// Row-anchor generator configuration for a cropped region of height
/// `height` pixels. Anchors live in [0, height] with 0 at the distant (top)
/// edge of the cropped region. `base` is the logarithm base of the focusing
/// map; larger values concentrate anchors harder toward row 0.
struct RowSampler {
  int n_sample = 36;
  int height = 320;
  SampleMode mode = SampleMode::kFocusing;
  double base = 10.0;

  void validate() const {
    if (n_sample < 2) throw std::invalid_argument("RowSampler: n_sample must be >= 2");
    if (height < 1) throw std::invalid_argument("RowSampler: height must be positive");
    if (!(base > 1.0)) throw std::invalid_argument("RowSampler: base must be > 1");
  }
};

namespace detail {

// Round half away from zero, then clamp into [0, height].
inline int round_row(double y, int height) {
  return std::clamp(static_cast<int>(std::lround(y)), 0, height);
}

}  // namespace detail

/// Equally spaced anchors: rows[i] = round(H * i / (n-1)). May contain
/// duplicates when n_sample exceeds height + 1; run dedup_rows before
/// feeding the result to SampledLane.
inline std::vector<int> uniform_rows(int n_sample, int height) {
  RowSampler{n_sample, height, SampleMode::kUniform}.validate();
  std::vector<int> rows(static_cast<std::size_t>(n_sample));
  for (int i = 0; i < n_sample; ++i) {
    const double y = static_cast<double>(height) * i / (n_sample - 1);
    rows[static_cast<std::size_t>(i)] = detail::round_row(y, height);
  }
  return rows;
}

inline std::vector<int> uniform_rows(const RowSampler& s) {
  return uniform_rows(s.n_sample, s.height);
}

/// The focusing map before rounding. With a_i = i/(n-1) and
/// g(t) = log_base(1 + (base-1) t), position i maps to 1 - g(1 - a_i).
/// g runs 0 -> 1 over [0, 1] and rises fastest near 0, so anchors cluster at
/// small row values (the distant edge) while both endpoints stay fixed:
/// position 0 maps to 0 and position n-1 maps to 1 exactly. As base -> 1 the
/// map converges pointwise to the identity, i.e. to uniform sampling.
inline double focusing_position(double a, double base) {
  const double g = std::log1p((base - 1.0) * (1.0 - a)) / std::log1p(base - 1.0);
  return 1.0 - g;
}

/// Raw focusing anchors, one per sample point and in sample order. The
/// sequence is nondecreasing; logarithmic discretization can repeat values,
/// which focusing_rows removes.
inline std::vector<int> focusing_rows_raw(int n_sample, int height, double base) {
  RowSampler{n_sample, height, SampleMode::kFocusing, base}.validate();
  std::vector<int> rows(static_cast<std::size_t>(n_sample));
  for (int i = 0; i < n_sample; ++i) {
    const double a = static_cast<double>(i) / (n_sample - 1);
    const double y = static_cast<double>(height) * focusing_position(a, base);
    rows[static_cast<std::size_t>(i)] = detail::round_row(y, height);
  }
  return rows;
}

/// Strictly increasing subsequence of a nondecreasing anchor list, keeping
/// the first occurrence of each value. Rejects decreasing input.
inline std::vector<int> dedup_rows(const std::vector<int>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i] < rows[i - 1])
      throw std::invalid_argument("dedup_rows: input must be nondecreasing");
    if (out.empty() || rows[i] != out.back()) out.push_back(rows[i]);
  }
  return out;
}

/// Deduplicated focusing anchors: strictly increasing, first = 0,
/// last = height, gaps widening from the distant edge toward the observer.
/// Output length may be below n_sample.
inline std::vector<int> focusing_rows(int n_sample, int height, double base) {
  return dedup_rows(focusing_rows_raw(n_sample, height, base));
}

inline std::vector<int> focusing_rows(const RowSampler& s) {
  return focusing_rows(s.n_sample, s.height, s.base);
}

/// Mode-dispatching entry point; always returns strictly increasing anchors.
inline std::vector<int> anchor_rows(const RowSampler& s) {
  s.validate();
  return s.mode == SampleMode::kUniform ? dedup_rows(uniform_rows(s))
                                        : focusing_rows(s);
}

}  // namespace lanekit
