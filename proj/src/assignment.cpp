#include "drivesense/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drivesense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hungarian algorithm (shortest augmenting paths) on a square min-cost
// matrix. Returns the matched row of each column (1-based internals).
double hungarian_min_cost(const std::vector<double>& cost, int k,
                          std::vector<int>* row_of_col = nullptr) {
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
  std::vector<int> p(k + 1, 0), way(k + 1, 0);
  for (int i = 1; i <= k; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(k + 1, kInf);
    std::vector<char> used(k + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * k + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= k; ++j) {
    if (p[j] != 0) total += cost[(p[j] - 1) * k + (j - 1)];
  }
  if (row_of_col) {
    row_of_col->assign(k, -1);
    for (int j = 1; j <= k; ++j) (*row_of_col)[j - 1] = p[j] - 1;
  }
  return total;
}

// Best achievable total over the given row/column subsets. Forbidden and
// padding pairs enter the square matrix at cost 0, which makes them
// indistinguishable from "unmatched".
double best_total(const std::vector<double>& weights, int m,
                  const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(std::max(rows.size(), cols.size()));
  if (k == 0) return 0.0;
  std::vector<double> cost(static_cast<size_t>(k) * k, 0.0);
  for (size_t a = 0; a < rows.size(); ++a) {
    for (size_t b = 0; b < cols.size(); ++b) {
      const double w = weights[static_cast<size_t>(rows[a]) * m + cols[b]];
      if (w >= 0.0) cost[a * k + b] = -w;
    }
  }
  return -hungarian_min_cost(cost, k);
}

}  // namespace

double assignment_value(const std::vector<double>& weights, int n, int m) {
  if (static_cast<size_t>(n) * m != weights.size()) {
    throw std::invalid_argument("assignment: weight matrix size mismatch");
  }
  std::vector<int> rows(n), cols(m);
  for (int i = 0; i < n; ++i) rows[i] = i;
  for (int j = 0; j < m; ++j) cols[j] = j;
  return best_total(weights, m, rows, cols);
}

std::vector<int> solve_assignment(const std::vector<double>& weights, int n, int m) {
  if (static_cast<size_t>(n) * m != weights.size()) {
    throw std::invalid_argument("assignment: weight matrix size mismatch");
  }
  std::vector<int> match(n, -1);
  if (n == 0 || m == 0) return match;

  std::vector<int> rows(n), cols(m);
  for (int i = 0; i < n; ++i) rows[i] = i;
  for (int j = 0; j < m; ++j) cols[j] = j;

  // Lock rows in order onto the earliest column that preserves the optimum;
  // ties between optimal assignments resolve toward lower rows and earlier
  // columns.
  double target = best_total(weights, m, rows, cols);
  const double tol = 1e-9;
  for (int i = 0; i < n; ++i) {
    std::vector<int> rest_rows;
    for (int r : rows) {
      if (r > i) rest_rows.push_back(r);
    }
    int chosen = -1;
    for (size_t b = 0; b < cols.size(); ++b) {
      const double w = weights[static_cast<size_t>(i) * m + cols[b]];
      if (w < 0.0) continue;
      std::vector<int> rest_cols = cols;
      rest_cols.erase(rest_cols.begin() + b);
      if (w + best_total(weights, m, rest_rows, rest_cols) >= target - tol) {
        chosen = cols[b];
        target -= w;
        cols = std::move(rest_cols);
        break;
      }
    }
    match[i] = chosen;
    rows = std::move(rest_rows);
  }
  return match;
}

}  // namespace drivesense
