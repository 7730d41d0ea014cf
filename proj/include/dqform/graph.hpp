#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "dqform/dq_matrix.hpp"
#include "dqform/dual_quaternion.hpp"
#include "dqform/errors.hpp"
#include "dqform/hermitian_eigen.hpp"

namespace dqform {

/// Undirected mutual visibility graph: vertices are rigid bodies, an edge
/// (i, j) means i and j sense each other. No self-loops, no duplicates.
class VisibilityGraph {
 public:
  VisibilityGraph() = default;
  explicit VisibilityGraph(int n) : n_(n) {
    if (n < 0) throw DomainError("negative vertex count");
  }

  VisibilityGraph(int n, const std::vector<std::pair<int, int>>& edges) : VisibilityGraph(n) {
    for (const auto& [i, j] : edges) addEdge(i, j);
  }

  int vertexCount() const { return n_; }
  int edgeCount() const { return int(edges_.size()); }

  void addEdge(int i, int j) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw DomainError("edge endpoint out of range");
    if (i == j) throw DomainError("self-loop");
    edges_.insert(normalized(i, j));
  }

  bool hasEdge(int i, int j) const { return edges_.count(normalized(i, j)) > 0; }

  const std::set<std::pair<int, int>>& edges() const { return edges_; }

  int degree(int i) const {
    int d = 0;
    for (const auto& [a, b] : edges_)
      if (a == i || b == i) ++d;
    return d;
  }

  std::vector<int> neighbors(int i) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges_) {
      if (a == i) out.push_back(b);
      if (b == i) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool isConnected() const {
    if (n_ <= 1) return true;
    std::vector<bool> seen(std::size_t(n_), false);
    std::deque<int> queue{0};
    seen[0] = true;
    int visited = 1;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : neighbors(v))
        if (!seen[std::size_t(w)]) {
          seen[std::size_t(w)] = true;
          ++visited;
          queue.push_back(w);
        }
    }
    return visited == n_;
  }

 private:
  static std::pair<int, int> normalized(int i, int j) { return {std::min(i, j), std::max(i, j)}; }

  int n_ = 0;
  std::set<std::pair<int, int>> edges_;
};

/// Configurations of the n rigid bodies, optionally with per-agent twists
/// (used by the pose-level simulation) and per-directed-edge relative twists
/// (the entries of the relative twist adjacency matrix, which are supplied
/// data: only their imaginarity is validated).
struct PoseAssignment {
  std::vector<Posed> poses;
  std::vector<Twistd> twists;                              // per agent, optional
  std::map<std::pair<int, int>, DualQuaterniond> edgeTwists;  // per directed edge, optional
};

enum class AdjacencyKind { Config, Log, Twist };

/// Builds one of the three visibility-graph adjacency matrices:
///  - Config: entry (i, j) is the relative configuration q_i^-1 q_j,
///  - Log:    entry (i, j) is ln(q_i^-1 q_j),
///  - Twist:  entry (i, j) is the supplied relative twist for (i, j).
/// Config and Log entries for (j, i) are the conjugates of (i, j) by
/// construction, so those matrices are Hermitian.
inline DQMatrix buildAdjacency(const VisibilityGraph& g, const PoseAssignment& p,
                               AdjacencyKind kind) {
  const int n = g.vertexCount();
  if (int(p.poses.size()) != n && kind != AdjacencyKind::Twist)
    throw SizeMismatch("pose count does not match vertex count");

  DQMatrix a = DQMatrix::Zero(n, n);
  if (kind == AdjacencyKind::Twist) {
    for (const auto& [i, j] : g.edges()) {
      const auto fwd = p.edgeTwists.find({i, j});
      const auto bwd = p.edgeTwists.find({j, i});
      if (fwd == p.edgeTwists.end() || bwd == p.edgeTwists.end())
        throw MissingTwists("no relative twist supplied for edge (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
      if (!fwd->second.isImaginary(1e-12) || !bwd->second.isImaginary(1e-12))
        throw NotImaginary("relative twists must be imaginary dual quaternions");
      a(i, j) = fwd->second;
      a(j, i) = bwd->second;
    }
    return a;
  }

  for (const auto& [i, j] : g.edges()) {
    const Posed rel = p.poses[std::size_t(i)].conjugate() * p.poses[std::size_t(j)];
    if (kind == AdjacencyKind::Config) {
      a(i, j) = rel.dq();
      a(j, i) = conj(rel.dq());
    } else {
      const DualQuaterniond l = log(rel);
      a(i, j) = l;
      a(j, i) = conj(l);
    }
  }
  return a;
}

/// Deviation |prod q_{j_i j_{i+1}} - 1| of a relative-configuration product
/// around a closed walk, as a dual magnitude. `cycle` lists vertices with
/// first == last and length >= 3.
inline DualNumberd cycleConsistency(const VisibilityGraph& g, const DQMatrix& c,
                                    const std::vector<int>& cycle) {
  if (cycle.size() < 3 || cycle.front() != cycle.back())
    throw NotACycle("cycle must be a closed vertex list of length >= 3");
  DualQuaterniond prod(1.0);
  for (std::size_t t = 0; t + 1 < cycle.size(); ++t) {
    const int i = cycle[t], j = cycle[t + 1];
    if (!g.hasEdge(i, j)) throw NotACycle("(" + std::to_string(i) + "," + std::to_string(j) +
                                          ") is not an edge");
    prod *= c(i, j);
  }
  return (prod - DualQuaterniond(1.0)).magnitude();
}

struct TreeReduction {
  VisibilityGraph tree;
  std::vector<std::pair<int, int>> removed;  // lexicographically descending
};

/// Reduces a connected graph to a spanning tree: keeps the lowest-index BFS
/// tree from vertex 0 and removes every other edge (equivalently, repeatedly
/// deletes the lexicographically largest edge lying on a cycle).
inline TreeReduction reduceToTree(const VisibilityGraph& g) {
  if (!g.isConnected()) throw Disconnected("spanning tree requires a connected graph");
  const int n = g.vertexCount();
  VisibilityGraph tree(n);
  std::vector<bool> seen(std::size_t(std::max(n, 1)), false);
  std::deque<int> queue;
  if (n > 0) {
    queue.push_back(0);
    seen[0] = true;
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : g.neighbors(v))
      if (!seen[std::size_t(w)]) {
        seen[std::size_t(w)] = true;
        tree.addEdge(v, w);
        queue.push_back(w);
      }
  }
  TreeReduction out{std::move(tree), {}};
  for (const auto& e : g.edges())
    if (!out.tree.hasEdge(e.first, e.second)) out.removed.push_back(e);
  std::sort(out.removed.begin(), out.removed.end(), std::greater<>());
  return out;
}

/// Fundamental cycle basis relative to the BFS spanning tree: one closed walk
/// per removed edge, through tree paths.
inline std::vector<std::vector<int>> fundamentalCycles(const VisibilityGraph& g) {
  const TreeReduction red = reduceToTree(g);
  const int n = g.vertexCount();
  // Parent array of the BFS tree.
  std::vector<int> parent(std::size_t(std::max(n, 1)), -1);
  std::vector<int> depth(std::size_t(std::max(n, 1)), 0);
  std::vector<bool> seen(std::size_t(std::max(n, 1)), false);
  std::deque<int> queue;
  if (n > 0) {
    queue.push_back(0);
    seen[0] = true;
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : red.tree.neighbors(v))
      if (!seen[std::size_t(w)]) {
        seen[std::size_t(w)] = true;
        parent[std::size_t(w)] = v;
        depth[std::size_t(w)] = depth[std::size_t(v)] + 1;
        queue.push_back(w);
      }
  }
  std::vector<std::vector<int>> cycles;
  for (const auto& [i, j] : red.removed) {
    std::vector<int> up{i}, down{j};
    int a = i, b = j;
    while (depth[std::size_t(a)] > depth[std::size_t(b)]) up.push_back(a = parent[std::size_t(a)]);
    while (depth[std::size_t(b)] > depth[std::size_t(a)]) down.push_back(b = parent[std::size_t(b)]);
    while (a != b) {
      up.push_back(a = parent[std::size_t(a)]);
      down.push_back(b = parent[std::size_t(b)]);
    }
    std::vector<int> cycle = up;  // i .. lca
    down.pop_back();              // drop the shared lca
    for (auto it = down.rbegin(); it != down.rend(); ++it) cycle.push_back(*it);
    cycle.push_back(i);  // close through the removed edge (j, i)
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

/// Degree matrix, unit-entry Hermitian adjacency and Laplacian L = D - H.
struct LaplacianBundle {
  VisibilityGraph graph;
  Eigen::VectorXd degrees;
  DQMatrix adjacency;
  DQMatrix laplacian;
};

/// Validates H as a dual quaternion adjacency matrix for g (Hermitian, unit
/// dual quaternion entries exactly on the edge set, zero elsewhere) and
/// assembles the Laplacian bundle.
inline LaplacianBundle laplacian(const VisibilityGraph& g, const DQMatrix& h) {
  const int n = g.vertexCount();
  if (h.rows() != n || h.cols() != n) throw SizeMismatch("adjacency shape");
  if (!isHermitian(h)) throw AdjacencyInvalid("adjacency matrix is not Hermitian");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j && g.hasEdge(i, j)) {
        const DualNumberd mag = h(i, j).magnitude();
        if (std::abs(mag.s - 1.0) > 1e-9 || std::abs(mag.d) > 1e-9)
          throw AdjacencyInvalid("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") is not a unit dual quaternion");
      } else if (!h(i, j).isZero()) {
        throw AdjacencyInvalid("nonzero entry off the edge set at (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
      }
    }

  LaplacianBundle out;
  out.graph = g;
  out.degrees.resize(n);
  out.adjacency = h;
  out.laplacian = -h;
  for (int i = 0; i < n; ++i) {
    out.degrees(i) = g.degree(i);
    out.laplacian(i, i) = DualQuaterniond(out.degrees(i));
  }
  return out;
}

struct LaplacianSpectrum {
  HermitianEigenDecomposition eigen;
  int zeroMultiplicity = 0;  // eigenvalues equal to 0 + 0 eps within 1e-8
  bool singleZero = false;   // the stability precondition: exactly one zero
};

inline LaplacianSpectrum laplacianSpectrum(const LaplacianBundle& bundle, double zeroTol = 1e-8) {
  LaplacianSpectrum out;
  out.eigen = hermitianEigen(bundle.laplacian);
  for (const DualNumberd& lam : out.eigen.eigenvalues)
    if (std::abs(lam.s) <= zeroTol && std::abs(lam.d) <= zeroTol) ++out.zeroMultiplicity;
  out.singleZero = out.zeroMultiplicity == 1;
  return out;
}

}  // namespace dqform
