#include <doctest.h>

#include <cmath>

#include "bmc/random.hpp"
#include "bmc/wiener.hpp"

using namespace bmc;

TEST_CASE("zero time is the empty integral") {
  RandomStream s(1, 0);
  const auto stats = wiener_integral_statistic(0.0, 128, 100, s);
  CHECK(stats.mean_error == 0.0);
  CHECK(stats.rms_error == 0.0);
}

TEST_CASE("single partition reduces to -(W^2 - t)/2") {
  // I_1 = W(0) dW = 0, so the mean error vanishes because E[W^2(1)] = 1.
  RandomStream s(2, 0);
  const auto stats = wiener_integral_statistic(1.0, 1, 20000, s);
  // per-path error is (1 - W^2)/2 with std sqrt(2)/2
  CHECK(std::abs(stats.mean_error) < 3.0 * (std::sqrt(0.5) / std::sqrt(20000.0)));
  CHECK(stats.rms_error == doctest::Approx(std::sqrt(0.5)).epsilon(0.05));
}

TEST_CASE("identity holds within three standard errors") {
  RandomStream s(3, 0);
  const auto stats = wiener_integral_statistic(1.0, 1024, 10000, s);
  const double sample_std = std::sqrt(
      std::max(0.0, stats.rms_error * stats.rms_error -
                        stats.mean_error * stats.mean_error));
  CHECK(std::abs(stats.mean_error) < 3.0 * sample_std / 100.0);
}

TEST_CASE("rms error decreases with partition refinement") {
  RandomStream coarse_stream(4, 0);
  RandomStream fine_stream(4, 1);
  const auto coarse = wiener_integral_statistic(1.0, 64, 10000, coarse_stream);
  const auto fine = wiener_integral_statistic(1.0, 4096, 10000, fine_stream);
  CHECK(fine.rms_error < coarse.rms_error);
  // theoretical rms is t sqrt(1/(2n))
  CHECK(coarse.rms_error == doctest::Approx(std::sqrt(0.5 / 64.0)).epsilon(0.1));
}

TEST_CASE("input validation") {
  RandomStream s(5, 0);
  CHECK_THROWS_AS(wiener_integral_statistic(-1.0, 8, 8, s), std::invalid_argument);
  CHECK_THROWS_AS(wiener_integral_statistic(1.0, 0, 8, s), std::invalid_argument);
  CHECK_THROWS_AS(wiener_integral_statistic(1.0, 8, 0, s), std::invalid_argument);
}
