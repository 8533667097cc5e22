#pragma once

#include "absnet/common.hpp"

namespace absnet::channel {

/// Probabilistic air-to-ground / air-to-air propagation model parameters.
struct Params {
  double carrier_frequency_hz = 2e9;
  double path_loss_exponent = 2.0;
  double mu_los_db = 5.0;    ///< excess loss on line-of-sight links (dB)
  double mu_nlos_db = 20.0;  ///< excess loss on non-line-of-sight links (dB)
  double psi = 11.95;        ///< environment constant of the LoS sigmoid
  double eta = 0.14;         ///< environment constant of the LoS sigmoid

  /// Free-space scale factor 4*pi*f_c/c (1/m).
  double wave_factor() const;

  /// Throws ValidationError when a field is outside its physical range.
  void validate() const;
};

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s

double db_to_linear(double db);

/// Elevation angle in degrees seen between two nodes: asin(|dz| / distance),
/// in [0, 90].  Throws ValidationError for coincident positions.
double elevation_angle_deg(const Vec3& a, const Vec3& b);

/// Line-of-sight probability 1 / (1 + psi * exp(-eta * (theta - psi))) for an
/// elevation angle in degrees; strictly increasing in theta.
double los_probability(double theta_deg, const Params& p);

/// Air-to-air path loss (K_o * d)^alpha * mu_los (linear).  d > 0 required.
double a2a_path_loss(const Vec3& a, const Vec3& b, const Params& p);

/// Mean air-to-ground path loss: the LoS/NLoS mixture weighted by the
/// elevation-dependent LoS probability.
double a2g_path_loss_avg(const Vec3& aerial, const Vec3& ground,
                         const Params& p);

/// Reciprocal average path loss between two nodes.  Aerial-aerial pairs use
/// the air-to-air model; mixed pairs the air-to-ground mixture; and
/// ground-level pairs the mixture evaluated at zero elevation (worst-case
/// NLoS-dominated).
double channel_gain(const Vec3& a, bool a_aerial, const Vec3& b, bool b_aerial,
                    const Params& p);

}  // namespace absnet::channel
