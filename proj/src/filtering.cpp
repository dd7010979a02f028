#include "drivesense/filtering.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace drivesense {

namespace {

struct PlaneFit {
  PlaneCoefficients plane;
  int inliers = 0;
};

std::optional<PlaneCoefficients> plane_from_points(const Point& p0, const Point& p1,
                                                   const Point& p2) {
  const double ux = p1.x - p0.x, uy = p1.y - p0.y, uz = p1.z - p0.z;
  const double vx = p2.x - p0.x, vy = p2.y - p0.y, vz = p2.z - p0.z;
  double nx = uy * vz - uz * vy;
  double ny = uz * vx - ux * vz;
  double nz = ux * vy - uy * vx;
  const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (norm < 1e-12) return std::nullopt;
  nx /= norm; ny /= norm; nz /= norm;
  if (nz < 0) { nx = -nx; ny = -ny; nz = -nz; }
  PlaneCoefficients pl;
  pl.a = nx; pl.b = ny; pl.c = nz;
  pl.d = -(nx * p0.x + ny * p0.y + nz * p0.z);
  return pl;
}

int count_inliers(const PointCloud& cloud, const PlaneCoefficients& pl, double thr) {
  int n = 0;
  for (const Point& p : cloud.points) {
    if (std::abs(pl.signed_distance(p)) <= thr) ++n;
  }
  return n;
}

// Least-squares refinement over the inliers of a candidate plane.
std::optional<PlaneCoefficients> refine_plane(const PointCloud& cloud,
                                              const PlaneCoefficients& pl,
                                              double thr) {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(cloud.points.size()); ++i) {
    const Point& p = cloud.points[i];
    if (std::abs(pl.signed_distance(p)) <= thr) {
      centroid += Eigen::Vector3d(p.x, p.y, p.z);
      idx.push_back(i);
    }
  }
  if (idx.size() < 3) return std::nullopt;
  centroid /= static_cast<double>(idx.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (int i : idx) {
    const Point& p = cloud.points[i];
    Eigen::Vector3d d(p.x - centroid.x(), p.y - centroid.y(), p.z - centroid.z());
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  Eigen::Vector3d n = es.eigenvectors().col(0);  // smallest eigenvalue
  if (n.z() < 0) n = -n;
  PlaneCoefficients out;
  out.a = n.x(); out.b = n.y(); out.c = n.z();
  out.d = -n.dot(centroid);
  return out;
}

}  // namespace

GroundRemovalResult remove_ground(const PointCloud& cloud,
                                  const GroundRemovalConfig& cfg) {
  GroundRemovalResult result;
  result.cloud.timestamp_us = cloud.timestamp_us;
  result.cloud.frame_id = cloud.frame_id;

  if (cfg.method == GroundRemovalMethod::z_threshold) {
    for (const Point& p : cloud.points) {
      if (p.z >= cfg.z_cutoff_m) result.cloud.points.push_back(p);
    }
    result.plane_found = true;
    return result;
  }

  const int n = static_cast<int>(cloud.points.size());
  if (n < 3) throw std::invalid_argument("remove_ground: plane mode needs >= 3 points");

  const double min_nz = std::cos(cfg.max_normal_tilt_deg * M_PI / 180.0);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> pick(0, n - 1);

  PlaneFit best;
  best.inliers = -1;
  for (int it = 0; it < cfg.iterations; ++it) {
    const int i = pick(rng), j = pick(rng), k = pick(rng);
    if (i == j || j == k || i == k) continue;
    auto cand = plane_from_points(cloud.points[i], cloud.points[j], cloud.points[k]);
    if (!cand || cand->c < min_nz) continue;
    const int inl = count_inliers(cloud, *cand, cfg.inlier_threshold_m);
    if (inl > best.inliers) best = {*cand, inl};
  }

  if (best.inliers >= 3) {
    if (auto refined = refine_plane(cloud, best.plane, cfg.inlier_threshold_m)) {
      if (refined->c >= min_nz) {
        const int inl = count_inliers(cloud, *refined, cfg.inlier_threshold_m);
        if (inl > best.inliers) best = {*refined, inl};
      }
    }
  }

  const int min_inliers =
      std::max(3, static_cast<int>(std::ceil(cfg.min_inlier_fraction * n)));
  if (best.inliers < min_inliers) {
    result.cloud = cloud;
    result.plane_found = false;
    return result;
  }

  for (const Point& p : cloud.points) {
    if (std::abs(best.plane.signed_distance(p)) > cfg.inlier_threshold_m) {
      result.cloud.points.push_back(p);
    }
  }
  result.plane = best.plane;
  result.plane_found = true;
  return result;
}

std::vector<std::vector<int>> cluster(const PointCloud& cloud, double eps_m,
                                      int min_cluster_size) {
  if (!(eps_m > 0.0)) throw std::invalid_argument("cluster: eps_m must be > 0");
  if (min_cluster_size < 1) throw std::invalid_argument("cluster: min_cluster_size must be >= 1");

  const int n = static_cast<int>(cloud.points.size());
  // Hash grid with eps-sized cells; neighbors live in the 3x3 block.
  std::unordered_map<std::int64_t, std::vector<int>> grid;
  auto key = [&](double x, double y) {
    const std::int64_t gx = static_cast<std::int64_t>(std::floor(x / eps_m));
    const std::int64_t gy = static_cast<std::int64_t>(std::floor(y / eps_m));
    return (gx << 32) ^ (gy & 0xffffffffLL);
  };
  for (int i = 0; i < n; ++i) {
    grid[key(cloud.points[i].x, cloud.points[i].y)].push_back(i);
  }

  std::vector<int> label(n, -1);
  std::vector<std::vector<int>> groups;
  const double eps2 = eps_m * eps_m;
  std::vector<int> stack;
  for (int i = 0; i < n; ++i) {
    if (label[i] != -1) continue;
    const int gid = static_cast<int>(groups.size());
    groups.emplace_back();
    label[i] = gid;
    stack.assign(1, i);
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      groups[gid].push_back(cur);
      const Point& pc = cloud.points[cur];
      const std::int64_t gx = static_cast<std::int64_t>(std::floor(pc.x / eps_m));
      const std::int64_t gy = static_cast<std::int64_t>(std::floor(pc.y / eps_m));
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          auto it = grid.find(((gx + dx) << 32) ^ ((gy + dy) & 0xffffffffLL));
          if (it == grid.end()) continue;
          for (int cand : it->second) {
            if (label[cand] != -1) continue;
            const double ddx = cloud.points[cand].x - pc.x;
            const double ddy = cloud.points[cand].y - pc.y;
            if (ddx * ddx + ddy * ddy <= eps2) {
              label[cand] = gid;
              stack.push_back(cand);
            }
          }
        }
      }
    }
  }

  std::vector<std::vector<int>> out;
  for (auto& g : groups) {
    if (static_cast<int>(g.size()) < min_cluster_size) continue;
    std::sort(g.begin(), g.end());
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace drivesense
