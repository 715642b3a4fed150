#ifndef MALINUCB_GRAPH_TOPOLOGY_HPP
#define MALINUCB_GRAPH_TOPOLOGY_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace malinucb
{

enum class GraphKind
{
  complete,
  cycle,
  k_regular,  // circulant ring lattice, k/2 neighbours on each side
  path,
  custom,
};

struct GraphSpec
{
  GraphKind kind = GraphKind::complete;
  int degree = 0;                              // k_regular only
  std::vector<std::pair<int, int>> edges;      // custom only, 0-indexed
  std::string source;                          // custom: where the edges came from

  // "complete", "cycle", "4-regular", "path", "custom".
  std::string label() const;
};

// Parses "complete", "cycle", "path", "custom", "k-regular", "8-regular",
// "k_regular:8". A bare "k-regular" takes its degree from `default_degree`.
GraphSpec parse_graph_kind(const std::string &text, int default_degree = 0);

// Reads a plain-text edge list: first line "n", then one "i j" pair per line.
// Returns the node count and fills spec.edges.
int load_edge_list(const std::string &path, GraphSpec &spec);

// Undirected simple graph plus a flag recording whether every node carries a
// self-loop. Neighbour lists exclude the node itself.
class Adjacency
{
public:
  Adjacency(int n, bool self_loops, std::vector<std::vector<int>> neighbors);

  int size() const { return n_; }
  bool self_loops() const { return self_loops_; }
  // Number of non-loop neighbours.
  int degree(int i) const { return static_cast<int>(neighbors_[static_cast<std::size_t>(i)].size()); }
  int max_degree() const;
  bool adjacent(int i, int j) const;
  const std::vector<int> &neighbors(int i) const { return neighbors_[static_cast<std::size_t>(i)]; }
  bool connected() const;
  bool regular() const;
  // Hop distance from `source` to every node (-1 when unreachable).
  std::vector<int> distances_from(int source) const;

private:
  int n_;
  bool self_loops_;
  std::vector<std::vector<int>> neighbors_;
};

Adjacency build_graph(const GraphSpec &spec, int n, bool self_loops);

//
// Communication network with its doubly-stochastic structure matrix W and the
// magnitude of its second-largest eigenvalue. The sparse row view lists the
// nonzero entries W_ij (diagonal included) used by gossip rounds.
//
class Topology
{
public:
  struct Entry
  {
    int col;
    double weight;
  };

  Topology(Adjacency adjacency, Eigen::MatrixXd weights, std::string label);

  // Wraps an explicit weight matrix. Validates symmetry, nonnegativity,
  // stochasticity and connectivity; the adjacency is the off-diagonal support.
  static Topology from_weights(const Eigen::MatrixXd &weights, std::string label = "weighted");

  const Adjacency &adjacency() const { return adjacency_; }
  const Eigen::MatrixXd &weights() const { return weights_; }
  const std::vector<std::vector<Entry>> &rows() const { return rows_; }
  int size() const { return adjacency_.size(); }
  double lambda2() const { return lambda2_; }
  double spectral_gap() const { return 1.0 - lambda2_; }
  const std::string &label() const { return label_; }

  // y = W x using only the nonzero entries of each row.
  Eigen::VectorXd apply(const Eigen::VectorXd &x) const;

private:
  Adjacency adjacency_;
  Eigen::MatrixXd weights_;
  std::vector<std::vector<Entry>> rows_;
  double lambda2_;
  std::string label_;
};

// Max-degree weights W = I - (M - A) / (k_max + 1), degrees without loops.
// For k-regular graphs this is uniform averaging over the closed neighbourhood.
Topology structure_matrix(const Adjacency &adjacency, std::string label = "graph");

// Convenience: build_graph followed by structure_matrix.
Topology make_topology(const GraphSpec &spec, int n, bool self_loops = true);

// max |lambda| over the spectrum of W with one copy of the eigenvalue closest
// to 1 removed. Throws ConfigError for non-symmetric input.
double second_eigenvalue(const Eigen::MatrixXd &w);

}  // namespace malinucb

#endif  // MALINUCB_GRAPH_TOPOLOGY_HPP
