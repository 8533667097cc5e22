#pragma once

#include <vector>

#include "absnet/mobility.hpp"

namespace absnet::energy {

/// Rotary-wing platform constants.
struct Params {
  double air_density = 1.225;           ///< kg/m^3
  double drag_coefficient = 0.05;       ///< fuselage/blade profile drag
  double reference_area_m2 = 0.3;       ///< effective flat-plate area
  double blade_chord_m = 0.1;
  int blade_count = 4;
  double angular_velocity_rad_s = 20.0; ///< rotor speed
  double rotor_radius_m = 0.5;
  double weight_n = 50.0;               ///< platform weight (newtons)
  /// Floors the descending-branch power at zero instead of letting it go
  /// negative (energy recovery is not modeled by the airframe).
  bool clamp_descent = false;

  void validate() const;
};

/// Induced-velocity ratio mu(v_h): the unique positive root of
///   2 rho pi omega^2 R^4 * mu * sqrt(v_h^2/(omega R)^2 + mu^2) = W,
/// found by bisection on [1e-8, 10] plus one Newton polish; the residual is
/// guaranteed below 1e-9 * W.
double induced_velocity_ratio(double v_h, const Params& p);

/// Airframe + blade drag:
///   1/2 rho C_D A_e v_h^3
///   + (pi/4) N_b c_b rho C_D omega^3 R^4 (1 + 3 (v_h/(omega R))^2).
double parasitic_power(double v_h, const Params& p);

/// Lift-induced power omega R W mu(v_h); decreasing in v_h.
double induced_power(double v_h, const Params& p);

/// Level-flight power: parasitic + induced.
double horizontal_power(double v_h, const Params& p);

enum class VerticalDirection { Climb, Descend };

/// Vertical-motion power at ascent/descent speed v_v >= 0:
///   climb:   (W/2) v_v + (W/2) sqrt(v_v^2 + 2W/(rho pi R^2))
///   descend: (W/2) v_v - (W/2) sqrt(v_v^2 + 2W/(rho pi R^2)),
/// the descending branch being negative until clamp_descent floors it at 0.
/// Identities: climb(0) equals hover induced power; climb(v) + descend(v)
/// (unclamped) equals W v.
double vertical_power(double v_v, VerticalDirection direction,
                      const Params& p);

/// Energy of one straight constant-speed leg with displacement `delta`
/// traversed in `duration_s`: the speed splits into horizontal and vertical
/// components and the leg costs duration * (horizontal + vertical power).
/// A zero displacement costs nothing regardless of duration.
double straight_leg_energy(const Vec3& delta, double duration_s,
                           const Params& p);

/// One moving segment of a node's trajectory.
struct SegmentEnergy {
  int slot = 0;            ///< slot the segment ends at
  double duration_s = 0.0;
  double distance_m = 0.0;
  double v_h = 0.0;        ///< horizontal speed component
  double v_v = 0.0;        ///< vertical speed magnitude
  double horizontal_power_w = 0.0;
  double vertical_power_w = 0.0;
  double energy_j = 0.0;
};

/// Energy account of one node across a trajectory.  Nodes that never move
/// report zero everywhere.
struct NodeEnergy {
  int node = 0;
  double path_length_m = 0.0;    ///< total traversed distance
  double displacement_m = 0.0;   ///< |final - initial|
  double moving_time_s = 0.0;    ///< time spent in moving segments
  double energy_j = 0.0;
  std::vector<SegmentEnergy> segments;
};

struct EnergyReport {
  std::vector<NodeEnergy> nodes;  ///< one entry per flow node
};

/// Integrates the segment power model over a logged trajectory.  Each
/// consecutive position pair is one segment of slot_duration_s; stationary
/// segments cost nothing and do not count as moving time.
EnergyReport trajectory_energy(const mobility::TrajectoryLog& traj,
                               const Params& p);

/// Saved-energy percentage 100 (1 - e_efficient / e_maxflow); negative when
/// the "efficient" trajectory actually costs more.
double energy_savings(double e_efficient, double e_maxflow);

}  // namespace absnet::energy
