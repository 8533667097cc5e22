#include "absnet/spectral.hpp"

#include <cmath>
#include <limits>

namespace absnet::spectral {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

constexpr int kMaxEnumerationNodes = 20;

void check_enumerable(const netgraph::CapacityGraph& g, const char* what) {
  require(g.size() <= kMaxEnumerationNodes,
          std::string(what) + ": exact enumeration supports at most " +
              std::to_string(kMaxEnumerationNodes) + " nodes");
  require(g.connected(),
          std::string(what) + ": graph must be connected");
}

double cut_value(const Eigen::MatrixXd& a, unsigned mask, int n) {
  double cut = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(mask >> i & 1u)) continue;
    for (int j = 0; j < n; ++j)
      if (!(mask >> j & 1u)) cut += a(i, j);
  }
  return cut;
}

void check_commodities(const netgraph::CapacityGraph& g,
                       const std::vector<CommoditySpec>& commodities) {
  require(!commodities.empty(), "commodities: at least one is required");
  for (const CommoditySpec& c : commodities) {
    require(c.source >= 0 && c.source < g.size() && c.destination >= 0 &&
                c.destination < g.size(),
            "commodities: endpoint index out of range");
    require(c.source != c.destination,
            "commodities: source and destination must differ");
    require(c.demand > 0, "commodities: demand must be > 0");
  }
}

}  // namespace

SpectralResult fiedler(const Eigen::MatrixXd& m,
                       const Eigen::VectorXd& null_direction,
                       std::string variant) {
  const int n = static_cast<int>(m.rows());
  require(m.cols() == n, "fiedler: matrix must be square");
  require(n >= 2, "fiedler: at least a 2x2 operator is required");
  require(null_direction.size() == n,
          "fiedler: null direction length must match the operator");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * scale,
          "fiedler: operator must be symmetric");
  const double null_norm = null_direction.norm();
  require(null_norm > 0, "fiedler: null direction must be nonzero");

  // Deflate: project out the null direction, then push it to the top of the
  // spectrum so the smallest eigenpair of the deflated operator is the
  // constrained minimizer.
  const Eigen::VectorXd nd = null_direction / null_norm;
  const Eigen::MatrixXd projector =
      Eigen::MatrixXd::Identity(n, n) - nd * nd.transpose();
  const double shift = m.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  const Eigen::MatrixXd deflated =
      projector * m * projector + shift * nd * nd.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(deflated);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error(
        "fiedler: eigendecomposition did not converge within the solver's "
        "internal iteration budget (30 sweeps per off-diagonal)");

  SpectralResult out;
  out.lambda2 = solver.eigenvalues()[0];
  // Eigenvalues sort ascending and the deflation shift strictly dominates the
  // constrained spectrum, so index 1 is the next constrained eigenvalue
  // whenever the constrained subspace has dimension >= 2.
  out.spectral_gap = n >= 3 ? solver.eigenvalues()[1] - solver.eigenvalues()[0]
                            : std::numeric_limits<double>::infinity();
  Eigen::VectorXd v = solver.eigenvectors().col(0);
  v -= nd * nd.dot(v);  // remove rounding leakage along the null direction
  v /= v.norm();
  int arg = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  if (v[arg] < 0) v = -v;
  out.fiedler_vector = v;
  out.residual = (m * v - out.lambda2 * v).norm();
  out.variant = std::move(variant);
  return out;
}

double cheeger_exact(const netgraph::CapacityGraph& g) {
  check_enumerable(g, "cheeger");
  const int n = g.size();
  const double total_volume = g.degrees.sum();
  double best = std::numeric_limits<double>::infinity();
  // Node 0 always stays in S; complements cover the other half of the space.
  // The all-ones mask is excluded structurally: summation-order rounding can
  // leave its complement volume at a positive near-zero instead of 0.
  for (unsigned mask = 1; mask + 1 < (1u << (n - 1)); ++mask) {
    const unsigned s = (mask << 1) | 1u;
    double vol = 0.0;
    for (int i = 0; i < n; ++i)
      if (s >> i & 1u) vol += g.degrees[i];
    const double den = std::min(vol, total_volume - vol);
    if (den <= 0) continue;
    best = std::min(best, cut_value(g.adjacency, s, n) / den);
  }
  // The split {0} vs rest is the mask-0 case excluded above.
  const double den0 = std::min(g.degrees[0], total_volume - g.degrees[0]);
  best = std::min(best, cut_value(g.adjacency, 1u, n) / den0);
  return best;
}

double weighted_cheeger_exact(const netgraph::CapacityGraph& g,
                              const netgraph::WeightMatrix& w) {
  check_enumerable(g, "weighted cheeger");
  const int n = g.size();
  w.validate(n);
  const double total_weight = w.w.sum();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (mask == (1u << n) - 1) continue;
    if (!(mask & 1u)) continue;  // complements are symmetric
    double weight = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) weight += w.w[i];
    const double den = std::min(weight, total_weight - weight);
    best = std::min(best, cut_value(g.adjacency, mask, n) / den);
  }
  return best;
}

CheegerBoundsReport verify_cheeger_bounds(const netgraph::CapacityGraph& g,
                                          const netgraph::WeightMatrix& w) {
  const netgraph::LaplacianSet lap = netgraph::laplacians(g, w);
  CheegerBoundsReport r;
  r.lambda2_normalized =
      fiedler(lap.normalized, lap.null_normalized, "normalized").lambda2;
  r.cheeger_constant = cheeger_exact(g);
  r.lambda2_weighted =
      fiedler(lap.weighted, lap.null_weighted, "weighted").lambda2;
  r.weighted_cheeger_constant = weighted_cheeger_exact(g, w);
  r.delta_max = g.degrees.maxCoeff();
  r.w_min = w.w.minCoeff();

  const double slack = 1e-9;
  const auto leq = [slack](double a, double b) {
    return a <= b + slack * std::max({1.0, std::abs(a), std::abs(b)});
  };
  r.normalized_bounds_hold =
      leq(r.lambda2_normalized / 2.0, r.cheeger_constant) &&
      leq(r.cheeger_constant, std::sqrt(2.0 * r.lambda2_normalized));
  r.weighted_bounds_hold =
      leq(r.lambda2_weighted / 2.0, r.weighted_cheeger_constant) &&
      leq(r.weighted_cheeger_constant,
          std::sqrt(2.0 * r.delta_max * r.lambda2_weighted / r.w_min));
  return r;
}

MultiWeightedCheeger multi_weighted_cheeger_exact(
    const netgraph::CapacityGraph& g,
    const std::vector<CommoditySpec>& commodities, double p) {
  check_enumerable(g, "multi-commodity cheeger");
  require(p >= 0.0 && p <= 1.0, "multi-commodity cheeger: p must lie in [0, 1]");
  check_commodities(g, commodities);
  const int n = g.size();
  std::vector<Eigen::VectorXd> weights;
  for (size_t k = 0; k < commodities.size(); ++k) {
    require(commodities[k].weights.has_value(),
            "multi-commodity cheeger: commodity " + std::to_string(k) +
                " is missing its weight vector");
    const Eigen::VectorXd& wk = *commodities[k].weights;
    require(wk.size() == n, "multi-commodity cheeger: weight vector of "
                            "commodity " + std::to_string(k) +
                            " has wrong length");
    require(wk.minCoeff() > 0, "multi-commodity cheeger: weights must be > 0");
    weights.push_back(wk);
  }

  MultiWeightedCheeger out;
  out.aggregate_weights = Eigen::VectorXd::Zero(n);
  for (const Eigen::VectorXd& wk : weights)
    out.aggregate_weights += wk.array().pow(1.0 - p).matrix();

  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (mask == (1u << n) - 1) continue;
    if (!(mask & 1u)) continue;
    double den = 0.0;
    for (const Eigen::VectorXd& wk : weights) {
      double side = 0.0;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1u) side += wk[i];
      den += std::pow(std::min(side, wk.sum() - side), 1.0 - p);
    }
    if (den <= 0) continue;
    best = std::min(best, cut_value(g.adjacency, mask, n) / den);
  }
  out.value = best;
  return out;
}

double min_multicut_exact(const netgraph::CapacityGraph& g,
                          const std::vector<CommoditySpec>& commodities) {
  check_enumerable(g, "min multicut");
  check_commodities(g, commodities);
  const int n = g.size();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n) - 1; ++mask) {
    double separated_demand = 0.0;
    for (const CommoditySpec& c : commodities) {
      const bool s_in = mask >> c.source & 1u;
      const bool d_in = mask >> c.destination & 1u;
      if (s_in != d_in) separated_demand += c.demand;
    }
    if (separated_demand <= 0) continue;
    best = std::min(best, cut_value(g.adjacency, mask, n) / separated_demand);
  }
  require(std::isfinite(best),
          "min multicut: no subset separates any commodity");
  return best;
}

}  // namespace absnet::spectral
