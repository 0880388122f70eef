#include <cmath>

#include "doctest.h"
#include "dragoncast/rate.hpp"

using namespace dragoncast;

TEST_CASE("gap is the max neighbor deficit normalized by neighbor count") {
  CHECK(gap({10, {4, 8}}) == doctest::Approx(3.0));  // (10-4)/2
  CHECK(gap({5, {5, 7}}) == doctest::Approx(0.0));   // max of 0/2 and -2/2
  CHECK(gap({3, {9, 9, 9}}) == doctest::Approx(-2.0));
  CHECK(gap({7, {}}) == 0.0);  // no neighbors: nothing to serve

  // Permutation invariance and the equal-rank-neighbor bound: adding a
  // neighbor at own rank never increases the un-normalized max difference.
  const RankView a{12, {2, 9, 5}};
  const RankView b{12, {5, 2, 9}};
  CHECK(gap(a) == gap(b));
  const double unnorm = gap(a) * 3;
  const RankView c{12, {2, 9, 5, 12}};
  CHECK(gap(c) * 4 <= unnorm + 1e-12);
}

TEST_CASE("dragon rate is alpha-scaled and silent at non-positive gap") {
  CHECK(dragon_rate(3.0, 0.5) == doctest::Approx(1.5));
  CHECK(dragon_rate(10.0, 0.2) == doctest::Approx(2.0));
  CHECK(dragon_rate(0.0, 0.5) == 0.0);
  CHECK(dragon_rate(-4.0, 0.5) == 0.0);
  // Positive homogeneity in the gap.
  CHECK(dragon_rate(2.5 * 3.0, 0.7) == doctest::Approx(2.5 * dragon_rate(3.0, 0.7)));
}

TEST_CASE("iron rate elevates only the source") {
  CHECK(iron_rate(true, 1.0, 8.867) == doctest::Approx(8.867));
  CHECK(iron_rate(false, 1.0, 8.867) == doctest::Approx(1.0));
  CHECK(iron_rate(true, 2.0, 1.0) == doctest::Approx(2.0));  // M = 1 degenerates
}

TEST_CASE("policy dispatch routes each variant") {
  const RankView view{10, {4, 8}};
  CHECK(policy_rate(FixedRate{3.5}, false, view) == doctest::Approx(3.5));
  CHECK(policy_rate(FixedRate{3.5}, true, view) == doctest::Approx(3.5));
  CHECK(policy_rate(IronRate{1.0, 8.867}, true, view) == doctest::Approx(8.867));
  CHECK(policy_rate(IronRate{1.0, 8.867}, false, view) == doctest::Approx(1.0));
  CHECK(policy_rate(DragonRate{0.5}, false, view) == doctest::Approx(1.5));
  CHECK(policy_rate(DragonRate{0.5}, false, {5, {5, 7}}) == 0.0);
}

TEST_CASE("next delay is the rate reciprocal with silence at zero") {
  CHECK(next_delay_seconds(2.0).value() == doctest::Approx(0.5));
  CHECK(next_delay_seconds(8.867).value() == doctest::Approx(0.1128).epsilon(1e-3));
  CHECK_FALSE(next_delay_seconds(0.0).has_value());
  CHECK_FALSE(next_delay_seconds(-1.0).has_value());

  CHECK(next_delay_micros(2.0).value() == 500'000);
  CHECK(next_delay_micros(8.867).value() == 112'778);  // round(1e6 / 8.867)
  CHECK_FALSE(next_delay_micros(0.0).has_value());
  CHECK(next_delay_micros(1e9).value() == 1);  // clamped to one microsecond
}
