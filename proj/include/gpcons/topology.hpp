#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gpcons/common.hpp"

namespace gpcons {

struct Edge {
  Index from = 0;
  Index to = 0;
  double weight = 1.0;
};

/// Undirected follower graph plus the leader attachment vector b.
///
/// Construction checks the structural invariants (square, symmetric, zero
/// diagonal, binary entries unless weighted edges are enabled). Connectivity
/// and the leader link are not required here so that a broken graph can still
/// be diagnosed by check_assumption3().
class Topology {
 public:
  Topology(Matrix adjacency, Vector leader_links, bool weighted = false);

  /// Agents are 0-based here; the config file uses 1-based ids.
  static Topology from_edges(Index agents, const std::vector<Edge>& edges,
                             const std::vector<Index>& leader_agents,
                             bool weighted = false);

  Index size() const { return adjacency_.rows(); }
  const Matrix& adjacency() const { return adjacency_; }
  const Vector& leader_links() const { return leader_links_; }
  double a(Index i, Index j) const { return adjacency_(i, j); }
  double b(Index i) const { return leader_links_(i); }
  bool weighted() const { return weighted_; }
  std::vector<Index> neighbors(Index i) const;

 private:
  Matrix adjacency_;
  Vector leader_links_;
  bool weighted_ = false;
};

/// The four-agent graph used in the reference simulation: edges 1-3, 2-3, 2-4
/// and leader links on agents 1 and 2.
Topology reference_topology();

struct GroundedLaplacian {
  Matrix matrix;
  Vector eigenvalues;  // ascending
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

struct Assumption3Check {
  bool connected = false;
  bool leader_linked = false;
  std::string diagnostic;

  bool ok() const { return connected && leader_linked; }
  explicit operator bool() const { return ok(); }
};

/// L = D - A. Throws ValidationError for a disconnected follower graph.
Matrix laplacian(const Topology& topology);

/// L + diag(b) with its spectrum. Throws ValidationError when Assumption 3
/// fails and NumericalError if the result is not positive definite.
GroundedLaplacian grounded_laplacian(const Topology& topology);

/// Connectivity by breadth-first traversal plus the max(b) > 0 test.
Assumption3Check check_assumption3(const Topology& topology);

}  // namespace gpcons
