#include "drivesense/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace drivesense {

namespace {

void project(std::vector<double>& x, const std::vector<double>& lo,
             const std::vector<double>& hi) {
  for (size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
}

}  // namespace

NelderMeadResult nelder_mead_bounded(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& start, const std::vector<double>& lower,
    const std::vector<double>& upper, const NelderMeadOptions& opts) {
  const size_t dim = start.size();
  if (lower.size() != dim || upper.size() != dim) {
    throw std::invalid_argument("nelder_mead: bound dimension mismatch");
  }
  for (size_t i = 0; i < dim; ++i) {
    if (!(lower[i] < upper[i])) throw std::invalid_argument("nelder_mead: empty box");
  }

  // reflection / expansion / contraction / shrink
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  struct Vertex {
    std::vector<double> x;
    double f;
  };
  std::vector<Vertex> simplex;
  simplex.reserve(dim + 1);
  {
    std::vector<double> x0 = start;
    project(x0, lower, upper);
    simplex.push_back({x0, objective(x0)});
    for (size_t i = 0; i < dim; ++i) {
      std::vector<double> xi = x0;
      const double step = opts.initial_step_fraction * (upper[i] - lower[i]);
      xi[i] += (xi[i] + step <= upper[i]) ? step : -step;
      project(xi, lower, upper);
      simplex.push_back({xi, objective(xi)});
    }
  }

  NelderMeadResult result;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    const Vertex& best = simplex.front();
    const Vertex& worst = simplex.back();

    double spread = 0.0;
    for (size_t i = 0; i < dim; ++i) {
      spread = std::max(spread, std::abs(worst.x[i] - best.x[i]));
    }
    if (std::abs(worst.f - best.f) <= opts.f_tolerance &&
        spread <= opts.x_tolerance) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (size_t v = 0; v + 1 < simplex.size(); ++v) {
      for (size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    auto combine = [&](double coeff) {
      std::vector<double> x(dim);
      for (size_t i = 0; i < dim; ++i) {
        x[i] = centroid[i] + coeff * (worst.x[i] - centroid[i]);
      }
      project(x, lower, upper);
      return x;
    };

    const std::vector<double> xr = combine(-alpha);
    const double fr = objective(xr);
    if (fr < best.f) {
      const std::vector<double> xe = combine(-alpha * gamma);
      const double fe = objective(xe);
      simplex.back() = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
      continue;
    }
    if (fr < simplex[dim - 1].f) {
      simplex.back() = {xr, fr};
      continue;
    }
    const bool outside = fr < worst.f;
    const std::vector<double> xc = combine(outside ? -rho : rho);
    const double fc = objective(xc);
    if (fc < std::min(fr, worst.f)) {
      simplex.back() = {xc, fc};
      continue;
    }
    // shrink toward the best vertex
    for (size_t v = 1; v < simplex.size(); ++v) {
      for (size_t i = 0; i < dim; ++i) {
        simplex[v].x[i] = best.x[i] + sigma * (simplex[v].x[i] - best.x[i]);
      }
      project(simplex[v].x, lower, upper);
      simplex[v].f = objective(simplex[v].x);
    }
  }

  std::sort(simplex.begin(), simplex.end(),
            [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  result.x = simplex.front().x;
  result.fx = simplex.front().f;
  result.iterations = it;
  return result;
}

}  // namespace drivesense
