#include "doctest.h"

#include "absnet/channel.hpp"

using namespace absnet;
using doctest::Approx;

namespace {
const channel::Params kDefault{};
}

TEST_CASE("db_to_linear converts decibels") {
  CHECK(channel::db_to_linear(0.0) == Approx(1.0).epsilon(1e-15));
  CHECK(channel::db_to_linear(10.0) == Approx(10.0).epsilon(1e-15));
  CHECK(channel::db_to_linear(5.0) ==
        Approx(3.1622776601683795).epsilon(1e-12));
  CHECK(channel::db_to_linear(-10.0) == Approx(0.1).epsilon(1e-12));
}

TEST_CASE("wave factor at 2 GHz") {
  CHECK(kDefault.wave_factor() == Approx(83.83169189032137).epsilon(1e-12));
  channel::Params doubled = kDefault;
  doubled.carrier_frequency_hz *= 2.0;
  CHECK(doubled.wave_factor() ==
        Approx(2.0 * kDefault.wave_factor()).epsilon(1e-14));
}

TEST_CASE("parameter validation rejects nonphysical values") {
  channel::Params p = kDefault;
  p.carrier_frequency_hz = -1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = kDefault;
  p.path_loss_exponent = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = kDefault;
  p.psi = -2.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  CHECK_NOTHROW(kDefault.validate());
}

TEST_CASE("elevation angle") {
  CHECK(channel::elevation_angle_deg(Vec3{0, 0, 20}, Vec3{0, 0, 0}) ==
        Approx(90.0).epsilon(1e-12));
  CHECK(channel::elevation_angle_deg(Vec3{30, 0, 20}, Vec3{0, 0, 0}) ==
        Approx(33.69006752597979).epsilon(1e-12));
  // symmetric in the argument order
  CHECK(channel::elevation_angle_deg(Vec3{0, 0, 0}, Vec3{30, 0, 20}) ==
        Approx(33.69006752597979).epsilon(1e-12));
  CHECK(channel::elevation_angle_deg(Vec3{10, 5, 0}, Vec3{0, 0, 0}) ==
        Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(channel::elevation_angle_deg(Vec3{1, 1, 1}, Vec3{1, 1, 1}),
                  ValidationError);
}

TEST_CASE("line-of-sight probability") {
  CHECK(channel::los_probability(kDefault.psi, kDefault) ==
        Approx(0.07722007722007722).epsilon(1e-12));
  CHECK(channel::los_probability(90.0, kDefault) ==
        Approx(0.9997853460579836).epsilon(1e-12));
  CHECK(channel::los_probability(0.0, kDefault) ==
        Approx(0.015462849710898698).epsilon(1e-12));
  double prev = -1.0;
  for (double theta = 0.0; theta <= 90.0; theta += 5.0) {
    const double p = channel::los_probability(theta, kDefault);
    CHECK(p > prev);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    prev = p;
  }
}

TEST_CASE("air-to-air path loss") {
  const Vec3 a{0, 0, 10}, b{1, 0, 10};
  CHECK(channel::a2a_path_loss(a, b, kDefault) ==
        Approx(22223.704938103292).epsilon(1e-12));
  // quadratic in distance at the default exponent
  const Vec3 c{2, 0, 10};
  CHECK(channel::a2a_path_loss(a, c, kDefault) ==
        Approx(4.0 * 22223.704938103292).epsilon(1e-12));
}

TEST_CASE("air-to-ground mixture loss") {
  const Vec3 up{30, 0, 20}, down{0, 0, 0};
  CHECK(channel::a2g_path_loss_avg(up, down, kDefault) ==
        Approx(349938491.2172511).epsilon(1e-12));
  // a higher elevation angle at the same distance is less lossy
  const double d = (up - down).norm();
  const Vec3 steep{0.0, 0.0, d};
  CHECK(channel::a2g_path_loss_avg(steep, down, kDefault) <
        channel::a2g_path_loss_avg(up, down, kDefault));
}

TEST_CASE("channel gain dispatches on node kinds and is symmetric") {
  const Vec3 g1{0, 0, 0}, g2{200, 0, 0}, up{30, 0, 20}, up2{31, 0, 20};
  CHECK(channel::channel_gain(up, true, up2, true, kDefault) ==
        Approx(4.499699770066089e-05).epsilon(1e-12));
  CHECK(channel::channel_gain(up, true, g1, false, kDefault) ==
        Approx(2.857645057911544e-09).epsilon(1e-12));
  CHECK(channel::channel_gain(g1, false, g2, false, kDefault) ==
        Approx(1.0 / 27690079606.270283).epsilon(1e-12));
  // order of the endpoints never matters
  CHECK(channel::channel_gain(g1, false, up, true, kDefault) ==
        channel::channel_gain(up, true, g1, false, kDefault));
  CHECK(channel::channel_gain(g2, false, g1, false, kDefault) ==
        channel::channel_gain(g1, false, g2, false, kDefault));
}

TEST_CASE("gain decreases with distance for every pairing") {
  const Vec3 origin{0, 0, 0};
  const Vec3 base{40, 0, 20};
  for (bool aerial : {true, false}) {
    double prev = 1e300;
    for (double x = 40.0; x <= 160.0; x += 40.0) {
      const double g = channel::channel_gain(
          Vec3{x, 0.0, aerial ? 20.0 : 0.0}, aerial, origin, false, kDefault);
      CHECK(g < prev);
      prev = g;
    }
  }
  (void)base;
}
