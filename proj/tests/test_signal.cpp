#include <doctest.h>

#include <random>

#include "drivesense/signal.hpp"

using namespace drivesense;

namespace {

SignalSeries series(const std::vector<double>& values, std::int64_t step_us = 500'000) {
  SignalSeries s;
  for (size_t i = 0; i < values.size(); ++i) {
    s.timestamps_us.push_back(static_cast<std::int64_t>(i) * step_us);
    s.values.push_back(values[i]);
  }
  return s;
}

}  // namespace

TEST_CASE("pearson: affine dependence gives exactly +/-1") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<double> base(50);
  for (double& v : base) v = u(rng);

  std::vector<double> pos(base.size()), neg(base.size());
  for (size_t i = 0; i < base.size(); ++i) {
    pos[i] = 2.0 * base[i] + 1.0;
    neg[i] = -base[i];
  }
  const SignalSeries x = series(base), y = series(pos), z = series(neg);
  CHECK(pearson(x, y, x.t_min(), x.t_max(), 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson(x, z, x.t_min(), x.t_max(), 2.0) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson: invariance under positive affine transforms, sign flip under negation") {
  std::mt19937 rng(9);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> a(200), b(200);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = n(rng);
    b[i] = 0.5 * a[i] + n(rng);
  }
  const SignalSeries x = series(a), y = series(b);
  const double r = pearson(x, y, x.t_min(), x.t_max(), 2.0);

  std::vector<double> scaled(a.size()), negated(b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    scaled[i] = 3.7 * a[i] - 11.0;
    negated[i] = -b[i];
  }
  CHECK(pearson(series(scaled), y, x.t_min(), x.t_max(), 2.0) ==
        doctest::Approx(r).epsilon(1e-12));
  CHECK(pearson(x, series(negated), x.t_min(), x.t_max(), 2.0) ==
        doctest::Approx(-r).epsilon(1e-12));
}

TEST_CASE("pearson: independent noise stays small (seed-pinned)") {
  std::mt19937 rng(1001);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> a(1000), b(1000);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = n(rng);
    b[i] = n(rng);
  }
  const SignalSeries x = series(a, 100'000), y = series(b, 100'000);
  // grid at 10 Hz hits the sample instants
  CHECK(std::abs(pearson(x, y, x.t_min(), x.t_max(), 10.0)) < 0.1);
}

TEST_CASE("pearson error paths") {
  const SignalSeries x = series({1, 2, 3, 4, 5});
  const SignalSeries flat = series({2, 2, 2, 2, 2});
  CHECK_THROWS_AS(pearson(x, flat, x.t_min(), x.t_max(), 2.0), std::domain_error);
  // fewer than 3 grid samples
  CHECK_THROWS_AS(pearson(x, x, 0, 600'000, 2.0), std::invalid_argument);
}

TEST_CASE("signal csv round trip and validation") {
  const SignalSeries s = series({0.25, 0.5, 0.75});
  const SignalSeries back = parse_signal_csv(signal_to_csv(s));
  REQUIRE(back.size() == 3);
  CHECK(back.values[1] == doctest::Approx(0.5));

  CHECK_THROWS_AS(parse_signal_csv("timestamp_us,value\n5,1\n5,2\n"), SchemaError);
  CHECK_THROWS_AS(parse_signal_csv("bad header\n"), SchemaError);
}

TEST_CASE("signal interpolation") {
  SignalSeries s;
  s.timestamps_us = {0, 1'000'000};
  s.values = {10.0, 20.0};
  CHECK(s.at(500'000) == doctest::Approx(15.0));
  CHECK(s.at(0) == doctest::Approx(10.0));
  CHECK_THROWS_AS(s.at(-1), std::out_of_range);
}
