#include "drivesense/idm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "drivesense/optim.hpp"

namespace drivesense {

void IdmBounds::validate() const {
  auto ok = [](double lo, double hi) { return lo > 0.0 && lo < hi; };
  if (!ok(s0_min, s0_max) || !ok(v0_min, v0_max) || !ok(T_min, T_max) ||
      !ok(a_min, a_max) || !ok(b_min, b_max)) {
    throw ConfigError("idm bounds: each range must satisfy 0 < min < max");
  }
}

bool IdmBounds::contains(const IdmParams& p) const {
  return p.s0 >= s0_min && p.s0 <= s0_max && p.v0 >= v0_min && p.v0 <= v0_max &&
         p.T >= T_min && p.T <= T_max && p.a >= a_min && p.a <= a_max &&
         p.b >= b_min && p.b <= b_max;
}

IdmParams IdmBounds::clamp(const IdmParams& p) const {
  IdmParams out = p;
  out.s0 = std::clamp(p.s0, s0_min, s0_max);
  out.v0 = std::clamp(p.v0, v0_min, v0_max);
  out.T = std::clamp(p.T, T_min, T_max);
  out.a = std::clamp(p.a, a_min, a_max);
  out.b = std::clamp(p.b, b_min, b_max);
  return out;
}

double idm_accel(const IdmParams& p, double v, double s, double dv) {
  if (!(s > 0.0)) throw std::domain_error("idm_accel: gap must be > 0");
  const double s_star =
      p.s0 + std::max(0.0, v * p.T + v * dv / (2.0 * std::sqrt(p.a * p.b)));
  return p.a * (1.0 - std::pow(v / p.v0, p.delta) - (s_star / s) * (s_star / s));
}

double idm_equilibrium_gap(const IdmParams& p, double v) {
  const double s_star = p.s0 + std::max(0.0, v * p.T);
  const double free = 1.0 - std::pow(v / p.v0, p.delta);
  if (!(free > 0.0)) throw std::domain_error("idm_equilibrium_gap: v must be below v0");
  return s_star / std::sqrt(free);
}

// ---------------------------------------------------------------------------

double SpeedProfile::speed_at(double t_s) const {
  if (breakpoints.empty()) throw std::invalid_argument("speed profile: no breakpoints");
  double v = breakpoints.front().second;
  for (const auto& [t, s] : breakpoints) {
    if (t <= t_s) v = s;
    else break;
  }
  return v;
}

double SpeedProfile::position_at(double t_s) const {
  if (breakpoints.empty()) throw std::invalid_argument("speed profile: no breakpoints");
  double pos = 0.0;
  double seg_t = 0.0;
  double seg_v = breakpoints.front().second;
  for (const auto& [t, v] : breakpoints) {
    if (t <= 0.0) {
      seg_v = v;
      continue;
    }
    if (t >= t_s) break;
    pos += seg_v * (t - seg_t);
    seg_t = t;
    seg_v = v;
  }
  pos += seg_v * (t_s - seg_t);
  return pos;
}

std::vector<FollowSample> simulate_follower(const IdmParams& p,
                                            const SpeedProfile& leader,
                                            const SimInit& init, double dt_s,
                                            int steps, std::int64_t t0_us) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("simulate_follower: dt must be > 0");
  if (!(init.s > 0.0)) throw std::invalid_argument("simulate_follower: initial gap must be > 0");

  std::vector<FollowSample> out;
  out.reserve(static_cast<size_t>(std::max(steps, 0)));

  // Follower state; the leader moves analytically.
  double x_f = 0.0;
  double v_f = init.v;
  const double x_l0 = init.s;  // leader bumper reference at t=0

  auto gap_at = [&](double t, double xf) { return x_l0 + leader.position_at(t) - xf; };

  for (int step = 0; step < steps; ++step) {
    const double t = step * dt_s;
    const double s = gap_at(t, x_f);
    if (!(s > 0.0)) {
      throw SimulationError("simulate_follower: collision (gap <= 0) at step " +
                            std::to_string(step), step);
    }
    const double dv = v_f - leader.speed_at(t);
    const double a_now = idm_accel(p, std::max(v_f, 0.0), s, dv);

    FollowSample sample;
    sample.timestamp_us = t0_us + static_cast<std::int64_t>(std::llround(t * 1e6));
    sample.v = v_f;
    sample.s = s;
    sample.dv = dv;
    sample.a_obs = a_now;
    out.push_back(sample);

    // RK4 on (x_f, v_f); speed clamped at 0 (no reversing).
    auto deriv = [&](double tt, double xf, double vf) {
      const double gap = gap_at(tt, xf);
      if (!(gap > 0.0)) {
        throw SimulationError("simulate_follower: collision (gap <= 0) at step " +
                              std::to_string(step), step);
      }
      const double vv = std::max(vf, 0.0);
      double acc = idm_accel(p, vv, gap, vv - leader.speed_at(tt));
      if (vf <= 0.0 && acc < 0.0) acc = 0.0;
      return std::pair<double, double>(vv, acc);
    };
    const auto [k1x, k1v] = deriv(t, x_f, v_f);
    const auto [k2x, k2v] = deriv(t + 0.5 * dt_s, x_f + 0.5 * dt_s * k1x, v_f + 0.5 * dt_s * k1v);
    const auto [k3x, k3v] = deriv(t + 0.5 * dt_s, x_f + 0.5 * dt_s * k2x, v_f + 0.5 * dt_s * k2v);
    const auto [k4x, k4v] = deriv(t + dt_s, x_f + dt_s * k3x, v_f + dt_s * k3v);
    x_f += dt_s / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v_f += dt_s / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    v_f = std::max(v_f, 0.0);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double window_sse(const std::vector<FollowSample>& window, const IdmParams& p) {
  double sse = 0.0;
  for (const FollowSample& s : window) {
    const double r = s.a_obs - idm_accel(p, s.v, s.s, s.dv);
    sse += r * r;
  }
  return sse;
}

double stddev(const std::vector<FollowSample>& w, double FollowSample::*field) {
  double mean = 0.0;
  for (const FollowSample& s : w) mean += s.*field;
  mean /= static_cast<double>(w.size());
  double acc = 0.0;
  for (const FollowSample& s : w) {
    const double d = s.*field - mean;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(w.size()));
}

}  // namespace

FitResult fit_idm(const std::vector<FollowSample>& window, const IdmBounds& bounds,
                  const FitConfig& cfg) {
  bounds.validate();
  if (static_cast<int>(window.size()) < cfg.min_samples) {
    throw std::invalid_argument("fit_idm: window has " + std::to_string(window.size()) +
                                " samples, need >= " + std::to_string(cfg.min_samples));
  }
  for (const FollowSample& s : window) {
    if (!(s.s > 0.0)) throw std::domain_error("fit_idm: sample with non-positive gap");
  }

  const std::vector<double> lo = {bounds.s0_min, bounds.v0_min, bounds.T_min,
                                  bounds.a_min, bounds.b_min};
  const std::vector<double> hi = {bounds.s0_max, bounds.v0_max, bounds.T_max,
                                  bounds.a_max, bounds.b_max};
  auto objective = [&](const std::vector<double>& x) {
    IdmParams p;
    p.s0 = x[0];
    p.v0 = x[1];
    p.T = x[2];
    p.a = x[3];
    p.b = x[4];
    return window_sse(window, p);
  };

  // Deterministic multi-start: box midpoint first, then seeded uniform draws.
  std::vector<std::vector<double>> starts;
  {
    std::vector<double> mid(5);
    for (int i = 0; i < 5; ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
    starts.push_back(mid);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    while (static_cast<int>(starts.size()) < std::max(1, cfg.multistarts)) {
      std::vector<double> x(5);
      for (int i = 0; i < 5; ++i) x[i] = lo[i] + unit(rng) * (hi[i] - lo[i]);
      starts.push_back(std::move(x));
    }
  }

  NelderMeadOptions nm;
  nm.max_iterations = cfg.max_iterations;
  FitResult result;
  double best = std::numeric_limits<double>::infinity();
  bool any_improved = false;
  for (const std::vector<double>& s : starts) {
    const double f0 = objective(s);
    const NelderMeadResult r = nelder_mead_bounded(objective, s, lo, hi, nm);
    if (r.fx < f0 * (1.0 - 1e-9) - 1e-15) any_improved = true;
    const double fx = std::min(r.fx, f0);
    if (fx < best) {
      best = fx;
      const std::vector<double>& x = r.fx <= f0 ? r.x : s;
      result.params.s0 = x[0];
      result.params.v0 = x[1];
      result.params.T = x[2];
      result.params.a = x[3];
      result.params.b = x[4];
    }
  }
  result.sse = best;
  result.flags.no_improvement = !any_improved;
  // Non-identifiable windows: no usable variation in the regressors.
  result.flags.low_excitation = stddev(window, &FollowSample::v) < 1e-3 &&
                                stddev(window, &FollowSample::s) < 1e-3 &&
                                stddev(window, &FollowSample::dv) < 1e-3;
  return result;
}

ParamSeries sliding_estimation(const std::vector<FollowSample>& samples,
                               double window_s, double stride_s,
                               const IdmBounds& bounds, const FitConfig& cfg) {
  if (!(window_s > 0.0) || !(stride_s > 0.0)) {
    throw std::invalid_argument("sliding_estimation: window and stride must be > 0");
  }
  ParamSeries series;
  if (samples.empty()) return series;

  const double t0 = samples.front().timestamp_us * 1e-6;
  const double t_end = samples.back().timestamp_us * 1e-6;
  const double span = t_end - t0;
  const int count = span + 1e-9 >= window_s
                        ? static_cast<int>(std::floor((span - window_s) / stride_s + 1e-9)) + 1
                        : 1;

  for (int k = 0; k < count; ++k) {
    const double w_lo = t0 + k * stride_s;
    const double w_hi = w_lo + window_s;
    std::vector<FollowSample> window;
    for (const FollowSample& s : samples) {
      const double t = s.timestamp_us * 1e-6;
      if (t >= w_lo - 1e-9 && t <= w_hi + 1e-9) window.push_back(s);
    }
    const std::int64_t center =
        static_cast<std::int64_t>(std::llround((w_lo + 0.5 * window_s) * 1e6));
    if (static_cast<int>(window.size()) < cfg.min_samples) {
      series.skipped.push_back({center, static_cast<int>(window.size())});
      continue;
    }
    const FitResult fit = fit_idm(window, bounds, cfg);
    series.windows.push_back(
        {center, fit.params, fit.sse, static_cast<int>(window.size()), fit.flags});
  }
  return series;
}

// ---------------------------------------------------------------------------

std::vector<FollowSample> parse_follow_csv(std::string_view text) {
  std::vector<FollowSample> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line.rfind("timestamp_us,v,s,dv,a_obs", 0) != 0) {
        throw SchemaError("line 1: expected header timestamp_us,v,s,dv,a_obs");
      }
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    double f[5];
    for (int i = 0; i < 5; ++i) {
      if (!std::getline(ls, field, ',')) {
        throw ParseError("line " + std::to_string(line_no) + ": expected 5 fields");
      }
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), f[i]);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad numeric field '" + field + "'");
      }
    }
    out.push_back({static_cast<std::int64_t>(f[0]), f[1], f[2], f[3], f[4]});
  }
  if (!header_seen) throw SchemaError("empty input: missing header row");
  return out;
}

std::string follow_to_csv(const std::vector<FollowSample>& samples) {
  std::ostringstream out;
  out << "timestamp_us,v,s,dv,a_obs\n";
  char buf[160];
  for (const FollowSample& s : samples) {
    std::snprintf(buf, sizeof(buf), "%lld,%.9g,%.9g,%.9g,%.9g\n",
                  static_cast<long long>(s.timestamp_us), s.v, s.s, s.dv, s.a_obs);
    out << buf;
  }
  return out.str();
}

std::string param_series_to_csv(const ParamSeries& series) {
  std::ostringstream out;
  out << "t_center_us,s0,v0,T,a,b,sse,flags\n";
  char buf[240];
  for (const ParamWindow& w : series.windows) {
    std::string flags;
    if (w.flags.low_excitation) flags += "low_excitation";
    if (w.flags.no_improvement) flags += flags.empty() ? "no_improvement" : "|no_improvement";
    if (flags.empty()) flags = "ok";
    std::snprintf(buf, sizeof(buf), "%lld,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%s\n",
                  static_cast<long long>(w.t_center_us), w.params.s0, w.params.v0,
                  w.params.T, w.params.a, w.params.b, w.sse, flags.c_str());
    out << buf;
  }
  return out.str();
}

}  // namespace drivesense
