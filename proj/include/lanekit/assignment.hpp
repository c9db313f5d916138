#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lanekit {

/// Maximum-weight bipartite assignment on a dense score matrix, restricted
/// to pairs whose score reaches `threshold`; pairs below it are non-edges
/// and can never be matched. Solved as a min-cost perfect matching on the
/// square padded matrix (Hungarian algorithm with potentials and shortest
/// augmenting paths, O(n^3)); padding and forbidden cells carry cost 0,
/// which is exactly the cost of leaving a row or column unmatched.
///
/// Returns one matched column per row (-1 when unmatched). With `total_score`
/// non-null, stores the achieved sum of matched scores.
inline std::vector<int> max_score_assignment(const std::vector<std::vector<double>>& score,
                                             double threshold, double* total_score = nullptr) {
  const int n_rows = static_cast<int>(score.size());
  const int n_cols = n_rows == 0 ? 0 : static_cast<int>(score[0].size());
  for (const auto& row : score)
    if (static_cast<int>(row.size()) != n_cols)
      throw std::invalid_argument("max_score_assignment: ragged score matrix");

  if (total_score) *total_score = 0.0;
  if (n_rows == 0 || n_cols == 0) return std::vector<int>(static_cast<std::size_t>(n_rows), -1);

  const int n = std::max(n_rows, n_cols);
  auto cost = [&](int i, int j) -> double {
    if (i < n_rows && j < n_cols && score[i][j] >= threshold) return -score[i][j];
    return 0.0;
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // column -> row, 1-based
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> min_slack(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < min_slack[static_cast<std::size_t>(j)]) {
          min_slack[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (min_slack[static_cast<std::size_t>(j)] < delta) {
          delta = min_slack[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          min_slack[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(static_cast<std::size_t>(n_rows), -1);
  for (int j = 1; j <= n; ++j) {
    const int i = match[static_cast<std::size_t>(j)] - 1;
    if (i < 0 || i >= n_rows || j - 1 >= n_cols) continue;
    if (score[i][j - 1] >= threshold) {
      row_to_col[static_cast<std::size_t>(i)] = j - 1;
      if (total_score) *total_score += score[i][j - 1];
    }
  }
  return row_to_col;
}

}  // namespace lanekit
