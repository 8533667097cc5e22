#include "absnet/distfiedler.hpp"

#include "absnet/spectral.hpp"

#include <cmath>
#include <limits>

namespace absnet::distfiedler {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

}  // namespace

std::vector<std::vector<std::pair<int, double>>> neighbor_exchange(
    const netgraph::CapacityGraph& g, const Eigen::VectorXd& payload,
    long long& messages, std::vector<std::pair<int, int>>* delivery_log) {
  const int n = g.size();
  require(payload.size() == n, "neighbor_exchange: one payload entry per node");
  std::vector<std::vector<std::pair<int, double>>> inbox(n);
  for (int from = 0; from < n; ++from)
    for (int to = 0; to < n; ++to) {
      if (from == to || g.adjacency(from, to) <= 0) continue;
      inbox[to].emplace_back(from, payload[from]);
      ++messages;
      if (delivery_log) delivery_log->emplace_back(from, to);
    }
  return inbox;
}

Eigen::MatrixXd flooded_sums(const netgraph::CapacityGraph& g,
                             const Eigen::MatrixXd& contributions, int rounds,
                             long long& messages,
                             std::vector<std::pair<int, int>>* delivery_log) {
  const int n = g.size();
  require(contributions.rows() == n, "flooded_sums: one row per node");
  require(rounds >= 1, "flooded_sums: at least one round is required");
  require(n <= 64, "flooded_sums: supports at most 64 nodes");
  // known[i] = contributor ids whose table entries node i has received.
  std::vector<std::uint64_t> known(n);
  for (int i = 0; i < n; ++i) known[i] = 1ULL << i;
  for (int r = 0; r < rounds; ++r) {
    std::vector<std::uint64_t> next = known;
    for (int from = 0; from < n; ++from)
      for (int to = 0; to < n; ++to) {
        if (from == to || g.adjacency(from, to) <= 0) continue;
        next[to] |= known[from];
        ++messages;
        if (delivery_log) delivery_log->emplace_back(from, to);
      }
    known = next;
  }
  Eigen::MatrixXd sums =
      Eigen::MatrixXd::Zero(n, contributions.cols());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (known[i] >> j & 1ULL) sums.row(i) += contributions.row(j);
  return sums;
}

namespace {

/// Per-node view of the scalar recurrence coefficients.  With enough flood
/// rounds every node holds identical values; with fewer, views may diverge
/// and the estimate degrades, which the error trace then shows.
struct NodeScalars {
  std::vector<double> alpha;
  std::vector<double> beta;
};

double ritz_error(const Eigen::VectorXd& estimate,
                  const Eigen::VectorXd& reference) {
  return std::min((estimate - reference).norm(),
                  (estimate + reference).norm());
}

}  // namespace

Trace distributed_fiedler(const netgraph::CapacityGraph& g,
                          const netgraph::WeightMatrix& w,
                          const Options& opt) {
  const int n = g.size();
  w.validate(n);
  require(opt.outer_iterations >= 1,
          "distributed fiedler: at least one iteration is required");
  require(opt.gossip_rounds >= 1,
          "distributed fiedler: at least one gossip round is required");
  require(g.connected(), "distributed fiedler: graph must be connected");

  const netgraph::LaplacianSet lap = netgraph::laplacians(g, w);
  const spectral::SpectralResult reference =
      spectral::fiedler(lap.weighted, lap.null_weighted, "weighted");

  Trace trace;
  std::vector<std::pair<int, int>>* log =
      opt.record_deliveries ? &trace.deliveries : nullptr;
  const auto reduce = [&](const Eigen::MatrixXd& contributions) {
    return flooded_sums(g, contributions, opt.gossip_rounds, trace.messages,
                        log);
  };

  // Node i's own operator row: diagonal beta_i/w_i locally, off-diagonal
  // -a_ij/sqrt(w_i w_j) after neighbors share their weights once.
  {
    auto inbox = neighbor_exchange(g, w.w, trace.messages, log);
    (void)inbox;  // weights are read from w directly below; the exchange
                  // models the one-time neighbor handshake.
  }
  const Eigen::VectorXd diag = g.degrees.cwiseQuotient(w.w);

  // Deflation direction (W^1/2 1)/norm: each node needs the global weight
  // sum, obtained from one flooded reduction.
  const Eigen::MatrixXd weight_sums = reduce(w.w);
  Eigen::VectorXd null_entry(n);
  for (int i = 0; i < n; ++i)
    null_entry[i] = std::sqrt(w.w[i]) / std::sqrt(weight_sums(i, 0));

  // Basis columns live per node: basis[k][i] is node i's entry of v_k.
  std::vector<Eigen::VectorXd> basis;
  std::vector<NodeScalars> scalars(n);

  // v_0: locally generated pseudo-random entries, deflated and normalized
  // with flooded sums.
  Eigen::VectorXd v0(n);
  for (int i = 0; i < n; ++i) {
    std::uint64_t s = derive_stream(opt.seed, static_cast<std::uint64_t>(i));
    v0[i] = uniform_in(s, -1.0, 1.0);
  }
  {
    Eigen::MatrixXd c(n, 1);
    c.col(0) = v0.cwiseProduct(null_entry);
    const Eigen::MatrixXd dot = reduce(c);
    for (int i = 0; i < n; ++i) v0[i] -= dot(i, 0) * null_entry[i];
    c.col(0) = v0.cwiseAbs2();
    const Eigen::MatrixXd norm2 = reduce(c);
    for (int i = 0; i < n; ++i) v0[i] /= std::sqrt(norm2(i, 0));
  }
  basis.push_back(v0);
  trace.krylov_steps = 1;

  const auto matvec = [&](const Eigen::VectorXd& v) {
    auto inbox = neighbor_exchange(g, v, trace.messages, log);
    Eigen::VectorXd u = diag.cwiseProduct(v);
    for (int i = 0; i < n; ++i)
      for (const auto& [j, vj] : inbox[i])
        u[i] -= g.adjacency(i, j) / std::sqrt(w.w[i] * w.w[j]) * vj;
    return u;
  };

  bool exhausted = false;
  Eigen::VectorXd estimate = v0;
  double lambda_est = std::numeric_limits<double>::quiet_NaN();
  for (int iter = 0; iter < opt.outer_iterations; ++iter) {
    if (!exhausted) {
      const int k = static_cast<int>(basis.size()) - 1;
      const Eigen::VectorXd& vk = basis[static_cast<size_t>(k)];
      Eigen::VectorXd r = matvec(vk);

      Eigen::MatrixXd c(n, 1);
      c.col(0) = vk.cwiseProduct(r);
      const Eigen::MatrixXd alpha_view = reduce(c);
      for (int i = 0; i < n; ++i) {
        scalars[i].alpha.push_back(alpha_view(i, 0));
        r[i] -= alpha_view(i, 0) * vk[i];
        if (k > 0)
          r[i] -= scalars[i].beta[static_cast<size_t>(k - 1)] *
                  basis[static_cast<size_t>(k - 1)][i];
      }

      // Re-orthogonalize against the whole basis and the null direction in
      // one batched flood.
      Eigen::MatrixXd coeffs(n, k + 2);
      for (int j = 0; j <= k; ++j)
        coeffs.col(j) = r.cwiseProduct(basis[static_cast<size_t>(j)]);
      coeffs.col(k + 1) = r.cwiseProduct(null_entry);
      const Eigen::MatrixXd coeff_view = reduce(coeffs);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= k; ++j)
          r[i] -= coeff_view(i, j) * basis[static_cast<size_t>(j)][i];
        r[i] -= coeff_view(i, k + 1) * null_entry[i];
      }

      Eigen::MatrixXd r2(n, 1);
      r2.col(0) = r.cwiseAbs2();
      const Eigen::MatrixXd norm_view = reduce(r2);
      const double beta = std::sqrt(std::max(0.0, norm_view(0, 0)));
      const double scale = std::max(1.0, diag.cwiseAbs().maxCoeff());
      if (beta <= 1e-12 * scale || k + 2 > n) {
        exhausted = true;  // invariant subspace reached: estimate is final
      } else {
        for (int i = 0; i < n; ++i) {
          scalars[i].beta.push_back(std::sqrt(norm_view(i, 0)));
          r[i] /= std::sqrt(norm_view(i, 0));
        }
        basis.push_back(r);
        trace.krylov_steps = static_cast<int>(basis.size());
      }

      // Every node extracts its entry of the smallest Ritz pair from its own
      // coefficient views (a purely local solve of the shared tridiagonal).
      const int dim = static_cast<int>(scalars[0].alpha.size());
      for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
        for (int j = 0; j < dim; ++j) {
          t(j, j) = scalars[i].alpha[static_cast<size_t>(j)];
          if (j + 1 < dim) {
            t(j, j + 1) = t(j + 1, j) =
                scalars[i].beta[static_cast<size_t>(j)];
          }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const Eigen::VectorXd s = es.eigenvectors().col(0);
        double x = 0.0;
        for (int j = 0; j < dim; ++j)
          x += s[j] * basis[static_cast<size_t>(j)][i];
        estimate[i] = x;
        if (i == 0) lambda_est = es.eigenvalues()[0];
      }
    }
    trace.error_per_iteration.push_back(
        ritz_error(estimate, reference.fiedler_vector));
    trace.messages_per_iteration.push_back(trace.messages);
  }

  // Library-wide sign convention for the assembled vector.
  int arg = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(estimate[i]) > std::abs(estimate[arg])) arg = i;
  if (estimate[arg] < 0) estimate = -estimate;
  trace.entries = estimate;
  trace.lambda2_estimate = lambda_est;
  return trace;
}

}  // namespace absnet::distfiedler
