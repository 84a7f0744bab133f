#include "gpcons/topology.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace gpcons {

Topology::Topology(Matrix adjacency, Vector leader_links, bool weighted)
    : adjacency_(std::move(adjacency)), leader_links_(std::move(leader_links)), weighted_(weighted) {
  const Index n = adjacency_.rows();
  if (n == 0 || adjacency_.cols() != n) throw ValidationError("adjacency must be a non-empty square matrix");
  if (leader_links_.size() != n) throw ValidationError("leader links must have one entry per agent");
  for (Index i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0.0) throw ValidationError("adjacency has a self-loop at agent " + std::to_string(i + 1));
    for (Index j = 0; j < n; ++j) {
      const double w = adjacency_(i, j);
      if (!std::isfinite(w) || w < 0.0) throw ValidationError("adjacency entries must be finite and non-negative");
      if (!weighted_ && w != 0.0 && w != 1.0) throw ValidationError("adjacency entries must be 0 or 1 (weighted edges disabled)");
      if (w != adjacency_(j, i)) throw ValidationError("adjacency not symmetric");
    }
    const double bi = leader_links_(i);
    if (!std::isfinite(bi) || bi < 0.0) throw ValidationError("leader links must be finite and non-negative");
    if (!weighted_ && bi != 0.0 && bi != 1.0) throw ValidationError("leader links must be 0 or 1 (weighted edges disabled)");
  }
}

Topology Topology::from_edges(Index agents, const std::vector<Edge>& edges,
                              const std::vector<Index>& leader_agents, bool weighted) {
  if (agents <= 0) throw ValidationError("topology needs at least one agent");
  Matrix a = Matrix::Zero(agents, agents);
  for (const Edge& e : edges) {
    if (e.from < 0 || e.to < 0 || e.from >= agents || e.to >= agents) {
      throw ValidationError("edge references an unknown agent");
    }
    if (e.from == e.to) throw ValidationError("adjacency has a self-loop at agent " + std::to_string(e.from + 1));
    a(e.from, e.to) = e.weight;
    a(e.to, e.from) = e.weight;
  }
  Vector b = Vector::Zero(agents);
  for (Index i : leader_agents) {
    if (i < 0 || i >= agents) throw ValidationError("leader link references an unknown agent");
    b(i) = 1.0;
  }
  return Topology(std::move(a), std::move(b), weighted);
}

std::vector<Index> Topology::neighbors(Index i) const {
  std::vector<Index> out;
  for (Index j = 0; j < size(); ++j) {
    if (adjacency_(i, j) != 0.0) out.push_back(j);
  }
  return out;
}

Topology reference_topology() {
  return Topology::from_edges(4, {{0, 2}, {1, 2}, {1, 3}}, {0, 1});
}

Assumption3Check check_assumption3(const Topology& topology) {
  const Index n = topology.size();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::deque<Index> queue{0};
  seen[0] = true;
  Index reached = 1;
  while (!queue.empty()) {
    const Index i = queue.front();
    queue.pop_front();
    for (Index j : topology.neighbors(i)) {
      if (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        ++reached;
        queue.push_back(j);
      }
    }
  }

  Assumption3Check out;
  out.connected = reached == n;
  out.leader_linked = topology.leader_links().maxCoeff() > 0.0;
  std::ostringstream msg;
  if (!out.connected) msg << "follower graph not connected (" << reached << " of " << n << " agents reachable from agent 1)";
  if (!out.leader_linked) msg << (out.connected ? "" : "; ") << "no agent is linked to the leader";
  out.diagnostic = msg.str();
  return out;
}

Matrix laplacian(const Topology& topology) {
  const auto check = check_assumption3(topology);
  if (!check.connected) throw ValidationError(check.diagnostic);
  const Matrix& a = topology.adjacency();
  Matrix l = -a;
  l.diagonal() = a.rowwise().sum();
  return l;
}

GroundedLaplacian grounded_laplacian(const Topology& topology) {
  const auto check = check_assumption3(topology);
  if (!check.ok()) throw ValidationError("assumption 3 violated: " + check.diagnostic);

  GroundedLaplacian out;
  out.matrix = laplacian(topology);
  out.matrix.diagonal() += topology.leader_links();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(out.matrix, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("grounded Laplacian eigen-decomposition failed");
  out.eigenvalues = eig.eigenvalues();
  out.lambda_min = out.eigenvalues(0);
  out.lambda_max = out.eigenvalues(out.eigenvalues.size() - 1);
  if (!(out.lambda_min > 1e-10 * std::max(1.0, out.lambda_max))) {
    throw NumericalError("grounded Laplacian is not positive definite (lambda_min = " +
                         std::to_string(out.lambda_min) + ")");
  }
  return out;
}

}  // namespace gpcons
