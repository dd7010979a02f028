#pragma once

#include <string_view>

#include "drivesense/types.hpp"

namespace drivesense {

/// Car-following parameters: minimum spacing s0 (m), desired free-flow speed
/// v0 (m/s), safe time headway T (s), maximum tolerated acceleration a
/// (m/s^2), comfortable braking deceleration b (m/s^2). The acceleration
/// exponent delta is a fixed model constant.
struct IdmParams {
  double s0 = 2.0;
  double v0 = 30.0;
  double T = 1.5;
  double a = 1.0;
  double b = 2.0;
  double delta = 4.0;
};

struct IdmBounds {
  double s0_min = 0.5, s0_max = 10.0;
  double v0_min = 1.0, v0_max = 60.0;
  double T_min = 0.1, T_max = 5.0;
  double a_min = 0.1, a_max = 5.0;
  double b_min = 0.1, b_max = 5.0;

  void validate() const;
  bool contains(const IdmParams& p) const;
  IdmParams clamp(const IdmParams& p) const;
};

/// accel = a * [1 - (v/v0)^delta - (s*/s)^2],
/// s* = s0 + max(0, v*T + v*dv / (2*sqrt(a*b))).
/// v = ego speed, s = gap to leader (> 0), dv = closing speed (ego - leader).
double idm_accel(const IdmParams& p, double v, double s, double dv);

/// Equilibrium gap when following a steady leader at speed v.
double idm_equilibrium_gap(const IdmParams& p, double v);

/// One car-following observation.
struct FollowSample {
  std::int64_t timestamp_us = 0;
  double v = 0.0;      // ego speed, m/s
  double s = 0.0;      // gap to leader, m
  double dv = 0.0;     // closing speed, m/s
  double a_obs = 0.0;  // observed ego acceleration, m/s^2
};

std::vector<FollowSample> parse_follow_csv(std::string_view text);
std::string follow_to_csv(const std::vector<FollowSample>& samples);

/// Piecewise-constant speed profile: speed_at(t) holds the value of the most
/// recent breakpoint. Integrates exactly.
struct SpeedProfile {
  std::vector<std::pair<double, double>> breakpoints;  // (t_s, speed)

  double speed_at(double t_s) const;
  double position_at(double t_s) const;  // integral from t=0
};

struct SimInit {
  double v = 0.0;  // follower speed
  double s = 10.0; // initial gap
};

/// Integrates the follower's speed and position against a scripted leader
/// with classic fixed-step 4th-order Runge-Kutta, emitting one FollowSample
/// per step (a_obs is the model acceleration at the step instant). Throws
/// SimulationError with the step index if the gap collapses to <= 0.
std::vector<FollowSample> simulate_follower(const IdmParams& p,
                                            const SpeedProfile& leader,
                                            const SimInit& init, double dt_s,
                                            int steps,
                                            std::int64_t t0_us = 1'000'000);

struct FitConfig {
  int min_samples = 20;
  int multistarts = 8;
  std::uint64_t seed = 7;
  int max_iterations = 2000;
};

struct FitFlags {
  bool low_excitation = false;  // window is (nearly) constant in v, s, dv
  bool no_improvement = false;  // no start improved on its initial objective
};

struct FitResult {
  IdmParams params;
  double sse = 0.0;
  FitFlags flags;
};

/// Least-squares IDM calibration over a window of observations: minimizes
/// sum (a_obs - idm_accel(p, v, s, dv))^2 by bounded derivative-free descent
/// from `multistarts` deterministic start points. delta stays fixed.
FitResult fit_idm(const std::vector<FollowSample>& window, const IdmBounds& bounds,
                  const FitConfig& cfg = {});

struct ParamWindow {
  std::int64_t t_center_us = 0;
  IdmParams params;
  double sse = 0.0;
  int sample_count = 0;
  FitFlags flags;
};

struct SkippedWindow {
  std::int64_t t_center_us = 0;
  int sample_count = 0;
};

struct ParamSeries {
  std::vector<ParamWindow> windows;
  std::vector<SkippedWindow> skipped;
};

/// Sliding-window estimation: windows of window_s seconds advanced by
/// stride_s over the sample span; windows with fewer than cfg.min_samples
/// samples are skipped and recorded.
ParamSeries sliding_estimation(const std::vector<FollowSample>& samples,
                               double window_s, double stride_s,
                               const IdmBounds& bounds, const FitConfig& cfg = {});

std::string param_series_to_csv(const ParamSeries& series);

}  // namespace drivesense
