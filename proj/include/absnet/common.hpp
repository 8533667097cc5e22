#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace absnet {

using Vec3 = Eigen::Vector3d;

/// Role of a node in the communication graph.  Sources and destinations are
/// terrestrial terminals; relays are the aerial base stations that move.
enum class NodeKind { Source, Destination, Relay };

inline bool is_aerial(NodeKind k) { return k == NodeKind::Relay; }
inline bool is_terminal(NodeKind k) { return k != NodeKind::Relay; }

std::string to_string(NodeKind k);

/// Raised for invalid inputs: malformed configuration, out-of-range
/// parameters, or violated operation preconditions.  The CLI maps this to
/// exit code 2; genuine runtime failures use std::runtime_error (exit 3).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// splitmix64 step; used to derive independent per-run RNG streams from a
/// base seed so that run k is reproducible regardless of the other runs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0xa0761d6478bd642fULL * (index + 1));
  splitmix64(s);
  return splitmix64(s);
}

/// Deterministic uniform double in [0, 1) from a 64-bit generator state,
/// independent of the standard library's unspecified distribution mapping.
inline double uniform_unit(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::uint64_t& state, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(state);
}

/// Locale-independent shortest-of-12-significant-digits rendering used by
/// every CSV writer, so identical inputs always serialize byte-identically.
inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x + 0.0);
  return buf;
}

}  // namespace absnet
