#pragma once

#include <string_view>

#include "drivesense/types.hpp"

namespace drivesense {

/// Irregularly sampled unitless time series with strictly increasing
/// timestamps.
struct SignalSeries {
  std::vector<std::int64_t> timestamps_us;
  std::vector<double> values;

  void validate() const;
  size_t size() const { return timestamps_us.size(); }
  std::int64_t t_min() const { return timestamps_us.front(); }
  std::int64_t t_max() const { return timestamps_us.back(); }

  /// Linear interpolation; throws std::out_of_range outside the span.
  double at(std::int64_t t_us) const;
};

/// Parses the `timestamp_us,value` CSV.
SignalSeries parse_signal_csv(std::string_view text);
std::string signal_to_csv(const SignalSeries& s);

/// Pearson correlation of two series after linear resampling onto a uniform
/// grid over [t0, t1] (clipped to the overlap of both series) at grid_hz.
/// Requires >= 3 grid samples; throws std::domain_error when either
/// resampled series has zero variance.
double pearson(const SignalSeries& x, const SignalSeries& y, std::int64_t t0_us,
               std::int64_t t1_us, double grid_hz = 2.0);

/// Pearson correlation of two equal-length value vectors.
double pearson_values(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace drivesense
