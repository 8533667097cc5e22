#include "absnet/energy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace absnet::energy {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

constexpr double kPi = std::numbers::pi;

/// Thrust-balance function whose positive root is mu: monotone increasing.
double thrust_gap(double mu, double beta, double lead, double weight) {
  return lead * mu * std::sqrt(beta + mu * mu) - weight;
}

}  // namespace

void Params::validate() const {
  require(air_density > 0, "energy params: air_density must be > 0");
  require(drag_coefficient > 0,
          "energy params: drag_coefficient must be > 0");
  require(reference_area_m2 > 0,
          "energy params: reference_area_m2 must be > 0");
  require(blade_chord_m > 0, "energy params: blade_chord_m must be > 0");
  require(blade_count > 0, "energy params: blade_count must be > 0");
  require(angular_velocity_rad_s > 0,
          "energy params: angular_velocity_rad_s must be > 0");
  require(rotor_radius_m > 0, "energy params: rotor_radius_m must be > 0");
  require(weight_n > 0, "energy params: weight_n must be > 0");
}

double induced_velocity_ratio(double v_h, const Params& p) {
  p.validate();
  require(v_h >= 0, "induced velocity: v_h must be >= 0");
  const double omega_r = p.angular_velocity_rad_s * p.rotor_radius_m;
  const double beta = v_h * v_h / (omega_r * omega_r);
  const double lead = 2.0 * p.air_density * kPi *
                      p.angular_velocity_rad_s * p.angular_velocity_rad_s *
                      std::pow(p.rotor_radius_m, 4);

  double lo = 1e-8, hi = 10.0;
  const double g_lo = thrust_gap(lo, beta, lead, p.weight_n);
  const double g_hi = thrust_gap(hi, beta, lead, p.weight_n);
  if (g_lo > 0 || g_hi < 0)
    throw std::runtime_error(
        "induced velocity: the bracket [1e-8, 10] does not enclose the root "
        "(g(lo) = " + std::to_string(g_lo) + ", g(hi) = " +
        std::to_string(g_hi) + "); parameters are outside the model's scale");
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (thrust_gap(mid, beta, lead, p.weight_n) < 0)
      lo = mid;
    else
      hi = mid;
  }
  double mu = 0.5 * (lo + hi);
  // One Newton polish sharpens the bisection estimate to machine precision.
  const double root = std::sqrt(beta + mu * mu);
  const double derivative = lead * (root + mu * mu / root);
  mu -= thrust_gap(mu, beta, lead, p.weight_n) / derivative;

  const double residual = std::abs(thrust_gap(mu, beta, lead, p.weight_n));
  if (!(residual < 1e-9 * p.weight_n))
    throw std::runtime_error(
        "induced velocity: root residual " + std::to_string(residual) +
        " exceeds 1e-9 * W after bisection and polish");
  return mu;
}

double parasitic_power(double v_h, const Params& p) {
  p.validate();
  require(v_h >= 0, "parasitic power: v_h must be >= 0");
  const double omega_r = p.angular_velocity_rad_s * p.rotor_radius_m;
  const double airframe = 0.5 * p.air_density * p.drag_coefficient *
                          p.reference_area_m2 * v_h * v_h * v_h;
  const double blades = (kPi / 4.0) * p.blade_count * p.blade_chord_m *
                        p.air_density * p.drag_coefficient *
                        std::pow(p.angular_velocity_rad_s, 3) *
                        std::pow(p.rotor_radius_m, 4) *
                        (1.0 + 3.0 * v_h * v_h / (omega_r * omega_r));
  return airframe + blades;
}

double induced_power(double v_h, const Params& p) {
  return p.angular_velocity_rad_s * p.rotor_radius_m * p.weight_n *
         induced_velocity_ratio(v_h, p);
}

double horizontal_power(double v_h, const Params& p) {
  return parasitic_power(v_h, p) + induced_power(v_h, p);
}

double vertical_power(double v_v, VerticalDirection direction,
                      const Params& p) {
  p.validate();
  require(v_v >= 0, "vertical power: v_v must be >= 0");
  const double disk_loading =
      2.0 * p.weight_n / (p.air_density * kPi * p.rotor_radius_m *
                          p.rotor_radius_m);
  const double root = std::sqrt(v_v * v_v + disk_loading);
  const double half_w = 0.5 * p.weight_n;
  if (direction == VerticalDirection::Climb) return half_w * (v_v + root);
  const double descend = half_w * (v_v - root);
  return p.clamp_descent ? std::max(0.0, descend) : descend;
}

double straight_leg_energy(const Vec3& delta, double duration_s,
                           const Params& p) {
  const double distance = delta.norm();
  if (distance == 0.0) return 0.0;
  require(duration_s > 0,
          "leg energy: a moving leg needs a positive duration");
  const double dz = delta.z();
  const double v_v = std::abs(dz) / duration_s;
  const double speed = distance / duration_s;
  const double v_h = std::sqrt(std::max(0.0, speed * speed - v_v * v_v));
  const VerticalDirection dir =
      dz > 0 ? VerticalDirection::Climb : VerticalDirection::Descend;
  return duration_s * (horizontal_power(v_h, p) + vertical_power(v_v, dir, p));
}

EnergyReport trajectory_energy(const mobility::TrajectoryLog& traj,
                               const Params& p) {
  p.validate();
  require(!traj.slots.empty(), "trajectory energy: empty trajectory");
  const size_t n = traj.slots.front().positions.size();
  for (const mobility::SlotRecord& s : traj.slots)
    require(s.positions.size() == n,
            "trajectory energy: inconsistent node counts across slots");

  EnergyReport report;
  report.nodes.resize(n);
  for (size_t i = 0; i < n; ++i) {
    NodeEnergy& acc = report.nodes[i];
    acc.node = static_cast<int>(i);
    for (size_t k = 1; k < traj.slots.size(); ++k) {
      const Vec3 delta =
          traj.slots[k].positions[i] - traj.slots[k - 1].positions[i];
      const double distance = delta.norm();
      if (distance == 0.0) continue;  // stationary slots cost nothing
      // Sprint-and-hold logs fly every leg at the cruise speed, so the
      // billable time is the flight itself, not the whole slot.
      const double t = traj.cruise_speed_mps > 0
                           ? distance / traj.cruise_speed_mps
                           : traj.slot_duration_s;
      require(t > 0,
              "trajectory energy: node " + std::to_string(i) +
                  " moves within a zero-duration slot");
      SegmentEnergy seg;
      seg.slot = traj.slots[k].slot;
      seg.duration_s = t;
      seg.distance_m = distance;
      const double dz = delta.z();
      seg.v_v = std::abs(dz) / t;
      const double speed = distance / t;
      seg.v_h = std::sqrt(std::max(0.0, speed * speed - seg.v_v * seg.v_v));
      seg.horizontal_power_w = horizontal_power(seg.v_h, p);
      seg.vertical_power_w = vertical_power(
          seg.v_v,
          dz > 0 ? VerticalDirection::Climb : VerticalDirection::Descend, p);
      seg.energy_j = t * (seg.horizontal_power_w + seg.vertical_power_w);
      acc.path_length_m += distance;
      acc.moving_time_s += t;
      acc.energy_j += seg.energy_j;
      acc.segments.push_back(seg);
    }
    acc.displacement_m =
        (traj.slots.back().positions[i] - traj.slots.front().positions[i])
            .norm();
  }
  return report;
}

double energy_savings(double e_efficient, double e_maxflow) {
  require(e_maxflow > 0, "energy savings: the reference energy must be > 0");
  return 100.0 * (1.0 - e_efficient / e_maxflow);
}

}  // namespace absnet::energy
