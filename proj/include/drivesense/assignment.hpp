#pragma once

#include <vector>

namespace drivesense {

/// Maximum-total-weight one-to-one assignment on an n x m weight matrix
/// (row-major). Entries < 0 mark forbidden pairs; rows and columns may stay
/// unmatched. Among assignments of maximal total weight, the one matching
/// lower rows to earlier columns is returned. result[i] is the column matched
/// to row i, or -1.
std::vector<int> solve_assignment(const std::vector<double>& weights, int n, int m);

/// Total weight of the best assignment (no tie-break), same conventions.
double assignment_value(const std::vector<double>& weights, int n, int m);

}  // namespace drivesense
