#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cycbp {

// One pairwise coupling E_{n,m} between variables n < m.
struct Edge {
  int n = 0;
  int m = 0;
  double coupling = 0.0;
};

/// Binary pairwise factor graph in log-domain parameterization:
///   f(x) ∝ prod_n exp(unary[n]·x_n) · prod_(n,m) exp(coupling·x_n·x_m)
/// with spins x_n ∈ {+1, -1}. Immutable after construction.
class PairwiseFactorGraph {
 public:
  PairwiseFactorGraph(std::vector<double> unary, std::vector<Edge> edges);

  int num_vars() const { return static_cast<int>(unary_.size()); }
  const std::vector<double>& unary() const { return unary_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  // Indices of edges incident to variable n.
  const std::vector<int>& incident_edges(int n) const { return adjacency_[n]; }
  int degree(int n) const { return static_cast<int>(adjacency_[n].size()); }

 private:
  std::vector<double> unary_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Validating constructor. Throws std::invalid_argument on out-of-range
/// indices, duplicate unordered pairs, self-loops, or non-finite values.
/// Edge order is preserved; endpoints are stored with n < m.
PairwiseFactorGraph build_graph(std::vector<double> unary, std::vector<Edge> edges);

int variable_degree(const PairwiseFactorGraph& g, int n);

// Graph with unary fields split evenly onto incident pairwise factors:
// each edge carries (share_n, coupling, share_m) with share_n = E_n / d_n.
struct ClusteredEdge {
  int n = 0;
  int m = 0;
  double share_n = 0.0;
  double coupling = 0.0;
  double share_m = 0.0;
};

struct ClusteredGraph {
  int num_vars = 0;
  std::vector<ClusteredEdge> edges;
  // Unary fields of isolated variables (degree 0); zero elsewhere.
  std::vector<double> residual_unary;
};

ClusteredGraph cluster_unaries(const PairwiseFactorGraph& g);

// Spin assignment, entries in {+1, -1}.
using Assignment = std::vector<int>;

/// Line-oriented text serialization:
///   N <num_vars>
///   U <n> <E_n>        (one line per variable)
///   E <n> <m> <E_nm>   (one line per edge)
/// Floats are written with 17 significant digits.
void save_graph(const PairwiseFactorGraph& g, std::ostream& os);
void save_graph(const PairwiseFactorGraph& g, const std::string& path);
PairwiseFactorGraph load_graph(std::istream& is);
PairwiseFactorGraph load_graph(const std::string& path);

}  // namespace cycbp
