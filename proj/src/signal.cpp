#include "drivesense/signal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace drivesense {

void SignalSeries::validate() const {
  if (timestamps_us.size() != values.size()) {
    throw SchemaError("signal: timestamp/value length mismatch");
  }
  for (size_t i = 1; i < timestamps_us.size(); ++i) {
    if (timestamps_us[i] <= timestamps_us[i - 1]) {
      throw SchemaError("signal: timestamps must be strictly increasing");
    }
  }
}

double SignalSeries::at(std::int64_t t_us) const {
  if (timestamps_us.empty() || t_us < t_min() || t_us > t_max()) {
    throw std::out_of_range("signal: query outside sampled span");
  }
  const auto it = std::lower_bound(timestamps_us.begin(), timestamps_us.end(), t_us);
  const size_t hi = static_cast<size_t>(it - timestamps_us.begin());
  if (timestamps_us[hi] == t_us) return values[hi];
  const size_t lo = hi - 1;
  const double frac = static_cast<double>(t_us - timestamps_us[lo]) /
                      static_cast<double>(timestamps_us[hi] - timestamps_us[lo]);
  return values[lo] + frac * (values[hi] - values[lo]);
}

SignalSeries parse_signal_csv(std::string_view text) {
  SignalSeries out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line.rfind("timestamp_us,value", 0) != 0) {
        throw SchemaError("line 1: expected header timestamp_us,value");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 2 fields");
    }
    double t = 0.0, v = 0.0;
    const std::string ts = line.substr(0, comma);
    const std::string vs = line.substr(comma + 1);
    auto r1 = std::from_chars(ts.data(), ts.data() + ts.size(), t);
    auto r2 = std::from_chars(vs.data(), vs.data() + vs.size(), v);
    if (r1.ec != std::errc() || r2.ec != std::errc() || !std::isfinite(v)) {
      throw ParseError("line " + std::to_string(line_no) + ": bad numeric field");
    }
    out.timestamps_us.push_back(static_cast<std::int64_t>(t));
    out.values.push_back(v);
  }
  if (!header_seen) throw SchemaError("empty input: missing header row");
  out.validate();
  return out;
}

std::string signal_to_csv(const SignalSeries& s) {
  std::ostringstream out;
  out << "timestamp_us,value\n";
  char buf[64];
  for (size_t i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%lld,%.9g\n",
                  static_cast<long long>(s.timestamps_us[i]), s.values[i]);
    out << buf;
  }
  return out.str();
}

double pearson_values(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw std::invalid_argument("pearson: need >= 3 paired samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw std::domain_error("pearson: zero variance in a resampled series");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson(const SignalSeries& x, const SignalSeries& y, std::int64_t t0_us,
               std::int64_t t1_us, double grid_hz) {
  x.validate();
  y.validate();
  if (!(grid_hz > 0.0)) throw std::invalid_argument("pearson: grid_hz must be > 0");
  if (x.size() == 0 || y.size() == 0) throw std::invalid_argument("pearson: empty series");
  const std::int64_t lo = std::max({t0_us, x.t_min(), y.t_min()});
  const std::int64_t hi = std::min({t1_us, x.t_max(), y.t_max()});
  const std::int64_t step = static_cast<std::int64_t>(std::llround(1e6 / grid_hz));
  if (step <= 0 || hi <= lo || (hi - lo) / step + 1 < 3) {
    throw std::invalid_argument("pearson: series overlap spans fewer than 3 grid samples");
  }
  std::vector<double> xs, ys;
  for (std::int64_t t = lo; t <= hi; t += step) {
    xs.push_back(x.at(t));
    ys.push_back(y.at(t));
  }
  return pearson_values(xs, ys);
}

}  // namespace drivesense
