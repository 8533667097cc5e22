#pragma once

#include "absnet/netgraph.hpp"

#include <optional>
#include <vector>

namespace absnet::spectral {

/// Second eigenpair of a symmetric PSD operator restricted to the orthogonal
/// complement of its null direction.
struct SpectralResult {
  double lambda2 = 0.0;
  Eigen::VectorXd fiedler_vector;  ///< unit norm, orthogonal to null direction
  double residual = 0.0;           ///< ||M v - lambda2 v||
  /// Distance to the next constrained eigenvalue (infinity for 2x2
  /// operators).  A vanishing gap means the minimizer is not unique.
  double spectral_gap = 0.0;
  std::string variant;             ///< caller-supplied label
};

/// Minimizes the Rayleigh quotient of `m` over vectors orthogonal to
/// `null_direction` via dense symmetric eigendecomposition with the null
/// direction deflated.  Sign convention: the component of largest magnitude
/// is positive (ties broken by lowest index), which makes results
/// deterministic.  Throws ValidationError for non-symmetric input and
/// std::runtime_error when the eigensolver fails to converge.
SpectralResult fiedler(const Eigen::MatrixXd& m,
                       const Eigen::VectorXd& null_direction,
                       std::string variant = "");

/// Exact conductance by subset enumeration:
///   min_S cut(S, ~S) / min(vol(S), vol(~S)),
/// with vol the capacity degree sum.  Connected graphs with <= 20 nodes.
double cheeger_exact(const netgraph::CapacityGraph& g);

/// Exact weighted isoperimetric constant:
///   min_S cut(S, ~S) / min(|S|_W, |~S|_W),  |S|_W = sum of node weights.
double weighted_cheeger_exact(const netgraph::CapacityGraph& g,
                              const netgraph::WeightMatrix& w);

/// One commodity of a multi-flow problem, with an optional per-node weight
/// vector used by the multi-commodity isoperimetric constant.
struct CommoditySpec {
  int source = 0;
  int destination = 0;
  double demand = 1.0;
  std::optional<Eigen::VectorXd> weights;
};

/// Spectral sandwich report for one graph/weighting:
///   lambda2(normalized)/2 <= h <= sqrt(2 lambda2(normalized))
///   lambda2(weighted)/2   <= h_W <= sqrt(2 delta_max lambda2(weighted)/w_min)
/// The weighted operator is W^-1/2 L W^-1/2 with null direction W^1/2 1.
struct CheegerBoundsReport {
  double lambda2_normalized = 0.0;
  double cheeger_constant = 0.0;
  double lambda2_weighted = 0.0;
  double weighted_cheeger_constant = 0.0;
  double delta_max = 0.0;  ///< maximum capacity degree
  double w_min = 0.0;      ///< smallest node weight
  bool normalized_bounds_hold = false;
  bool weighted_bounds_hold = false;

  bool all_hold() const {
    return normalized_bounds_hold && weighted_bounds_hold;
  }
};

/// Computes both sandwiches exactly (enumeration + dense eigensolve) and
/// checks them with relative slack 1e-9.
CheegerBoundsReport verify_cheeger_bounds(const netgraph::CapacityGraph& g,
                                          const netgraph::WeightMatrix& w);

struct MultiWeightedCheeger {
  double value = 0.0;
  Eigen::VectorXd aggregate_weights;  ///< w_bar_i = sum_k (w_i^k)^(1-p)
};

/// Exact multi-commodity isoperimetric constant
///   min_S cut(S,~S) / sum_k min(|S|_Wk, |~S|_Wk)^(1-p),
/// with p in [0, 1].  Every commodity must carry a weight vector.
MultiWeightedCheeger multi_weighted_cheeger_exact(
    const netgraph::CapacityGraph& g,
    const std::vector<CommoditySpec>& commodities, double p);

/// Exact minimum multicut ratio
///   min_S cut(S,~S) / sum of demands of commodities separated by S,
/// over subsets separating at least one commodity.
double min_multicut_exact(const netgraph::CapacityGraph& g,
                          const std::vector<CommoditySpec>& commodities);

}  // namespace absnet::spectral
