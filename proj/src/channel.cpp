#include "absnet/channel.hpp"

#include <cmath>

namespace absnet::channel {

namespace {
constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}
}  // namespace

double Params::wave_factor() const {
  return 4.0 * kPi * carrier_frequency_hz / kSpeedOfLight;
}

void Params::validate() const {
  require(carrier_frequency_hz > 0, "channel: carrier frequency must be > 0");
  require(path_loss_exponent >= 1.0 && path_loss_exponent <= 6.0,
          "channel: path loss exponent must lie in [1, 6]");
  require(mu_los_db >= 0, "channel: LoS excess loss must be >= 0 dB");
  require(mu_nlos_db >= mu_los_db,
          "channel: NLoS excess loss must be >= LoS excess loss");
  require(psi > 0, "channel: psi must be > 0");
  require(eta > 0, "channel: eta must be > 0");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double elevation_angle_deg(const Vec3& a, const Vec3& b) {
  const double d = (a - b).norm();
  require(d > 0, "channel: elevation angle undefined for coincident nodes");
  const double ratio = std::min(1.0, std::abs(a.z() - b.z()) / d);
  return std::asin(ratio) * 180.0 / kPi;
}

double los_probability(double theta_deg, const Params& p) {
  require(theta_deg >= 0.0 && theta_deg <= 90.0,
          "channel: elevation angle must lie in [0, 90] degrees");
  return 1.0 / (1.0 + p.psi * std::exp(-p.eta * (theta_deg - p.psi)));
}

namespace {
double mixture_loss(double distance, double theta_deg, const Params& p) {
  const double range = std::pow(p.wave_factor() * distance,
                                p.path_loss_exponent);
  const double p_los = los_probability(theta_deg, p);
  return range * (p_los * db_to_linear(p.mu_los_db) +
                  (1.0 - p_los) * db_to_linear(p.mu_nlos_db));
}
}  // namespace

double a2a_path_loss(const Vec3& a, const Vec3& b, const Params& p) {
  const double d = (a - b).norm();
  require(d > 0, "channel: air-to-air loss undefined at zero distance");
  return std::pow(p.wave_factor() * d, p.path_loss_exponent) *
         db_to_linear(p.mu_los_db);
}

double a2g_path_loss_avg(const Vec3& aerial, const Vec3& ground,
                         const Params& p) {
  const double d = (aerial - ground).norm();
  require(d > 0, "channel: air-to-ground loss undefined at zero distance");
  return mixture_loss(d, elevation_angle_deg(aerial, ground), p);
}

double channel_gain(const Vec3& a, bool a_aerial, const Vec3& b, bool b_aerial,
                    const Params& p) {
  if (a_aerial && b_aerial) return 1.0 / a2a_path_loss(a, b, p);
  if (a_aerial) return 1.0 / a2g_path_loss_avg(a, b, p);
  if (b_aerial) return 1.0 / a2g_path_loss_avg(b, a, p);
  const double d = (a - b).norm();
  require(d > 0, "channel: gain undefined at zero distance");
  return 1.0 / mixture_loss(d, 0.0, p);
}

}  // namespace absnet::channel
