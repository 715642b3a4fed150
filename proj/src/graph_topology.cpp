#include "malinucb/graph_topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "malinucb/errors.hpp"
#include "malinucb/symmetric_eigen.hpp"

namespace malinucb
{

std::string GraphSpec::label() const
{
  switch (kind)
  {
    case GraphKind::complete:
      return "complete";
    case GraphKind::cycle:
      return "cycle";
    case GraphKind::k_regular:
      return std::to_string(degree) + "-regular";
    case GraphKind::path:
      return "path";
    case GraphKind::custom:
      return "custom";
  }
  return "unknown";
}

GraphSpec parse_graph_kind(const std::string &text, int default_degree)
{
  GraphSpec spec;
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "complete")
  {
    spec.kind = GraphKind::complete;
  }
  else if (t == "cycle" || t == "ring")
  {
    spec.kind = GraphKind::cycle;
  }
  else if (t == "path")
  {
    spec.kind = GraphKind::path;
  }
  else if (t == "custom")
  {
    spec.kind = GraphKind::custom;
  }
  else if (t == "k-regular" || t == "k_regular" || t == "regular")
  {
    spec.kind = GraphKind::k_regular;
    spec.degree = default_degree;
  }
  else
  {
    std::string digits;
    if (t.rfind("k_regular:", 0) == 0 || t.rfind("k-regular:", 0) == 0)
    {
      digits = t.substr(10);
    }
    else if (const auto pos = t.find("-regular"); pos != std::string::npos && pos + 8 == t.size())
    {
      digits = t.substr(0, pos);
    }
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
    {
      throw ConfigError("unknown topology kind '" + text + "'");
    }
    spec.kind = GraphKind::k_regular;
    spec.degree = std::stoi(digits);
  }
  return spec;
}

int load_edge_list(const std::string &path, GraphSpec &spec)
{
  std::ifstream in(path);
  if (!in)
  {
    throw IoError(path, "cannot open edge list");
  }
  int n = 0;
  std::string line;
  bool have_n = false;
  int line_no = 0;
  spec.kind = GraphKind::custom;
  spec.edges.clear();
  spec.source = path;
  while (std::getline(in, line))
  {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
    {
      line.erase(hash);
    }
    std::istringstream fields(line);
    if (!have_n)
    {
      if (!(fields >> n))
      {
        continue;
      }
      have_n = true;
      continue;
    }
    int i = 0;
    int j = 0;
    if (!(fields >> i))
    {
      continue;
    }
    if (!(fields >> j))
    {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'i j'");
    }
    spec.edges.emplace_back(i, j);
  }
  if (!have_n || n < 1)
  {
    throw ConfigError(path + ": missing or invalid node count");
  }
  return n;
}

Adjacency::Adjacency(int n, bool self_loops, std::vector<std::vector<int>> neighbor_lists)
  : n_(n), self_loops_(self_loops), neighbors_(std::move(neighbor_lists))
{
  if (n_ < 1 || static_cast<int>(neighbors_.size()) != n_)
  {
    throw ConfigError("adjacency: node count mismatch");
  }
  for (int i = 0; i < n_; ++i)
  {
    auto &list = neighbors_[static_cast<std::size_t>(i)];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (int j : list)
    {
      if (j < 0 || j >= n_ || j == i)
      {
        throw ConfigError("adjacency: invalid neighbour " + std::to_string(j) + " of node " +
                          std::to_string(i));
      }
    }
  }
  for (int i = 0; i < n_; ++i)
  {
    for (int j : neighbors(i))
    {
      if (!adjacent(j, i))
      {
        throw ConfigError("adjacency: relation is not symmetric");
      }
    }
  }
}

int Adjacency::max_degree() const
{
  int k = 0;
  for (int i = 0; i < n_; ++i)
  {
    k = std::max(k, degree(i));
  }
  return k;
}

bool Adjacency::adjacent(int i, int j) const
{
  if (i == j)
  {
    return self_loops_;
  }
  const auto &list = neighbors(i);
  return std::binary_search(list.begin(), list.end(), j);
}

std::vector<int> Adjacency::distances_from(int source) const
{
  std::vector<int> dist(static_cast<std::size_t>(n_), -1);
  std::queue<int> frontier;
  dist[static_cast<std::size_t>(source)] = 0;
  frontier.push(source);
  while (!frontier.empty())
  {
    const int u = frontier.front();
    frontier.pop();
    for (int v : neighbors(u))
    {
      if (dist[static_cast<std::size_t>(v)] < 0)
      {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

bool Adjacency::connected() const
{
  const auto dist = distances_from(0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

bool Adjacency::regular() const
{
  for (int i = 1; i < n_; ++i)
  {
    if (degree(i) != degree(0))
    {
      return false;
    }
  }
  return true;
}

Adjacency build_graph(const GraphSpec &spec, int n, bool self_loops)
{
  if (n < 1)
  {
    throw ConfigError("graph needs at least one node");
  }
  std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(n));
  auto link = [&](int i, int j) {
    if (i == j)
    {
      return;
    }
    nbrs[static_cast<std::size_t>(i)].push_back(j);
    nbrs[static_cast<std::size_t>(j)].push_back(i);
  };

  switch (spec.kind)
  {
    case GraphKind::complete:
      for (int i = 0; i < n; ++i)
      {
        for (int j = i + 1; j < n; ++j)
        {
          link(i, j);
        }
      }
      break;
    case GraphKind::cycle:
    case GraphKind::k_regular:
    {
      const int k = spec.kind == GraphKind::cycle ? 2 : spec.degree;
      if (k <= 0 || k % 2 != 0)
      {
        throw ConfigError("k-regular graph needs a positive even degree, got " + std::to_string(k));
      }
      if (k >= n)
      {
        if (spec.kind == GraphKind::cycle && n <= 2)
        {
          // A 1- or 2-node "cycle" degenerates to the complete graph.
          for (int i = 0; i + 1 < n; ++i)
          {
            link(i, i + 1);
          }
          break;
        }
        throw ConfigError("k-regular graph needs k < n (k=" + std::to_string(k) +
                          ", n=" + std::to_string(n) + ")");
      }
      for (int i = 0; i < n; ++i)
      {
        for (int off = 1; off <= k / 2; ++off)
        {
          link(i, (i + off) % n);
        }
      }
      break;
    }
    case GraphKind::path:
      for (int i = 0; i + 1 < n; ++i)
      {
        link(i, i + 1);
      }
      break;
    case GraphKind::custom:
      for (const auto &[i, j] : spec.edges)
      {
        if (i < 0 || j < 0 || i >= n || j >= n)
        {
          throw ConfigError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") out of range for n=" + std::to_string(n));
        }
        link(i, j);
      }
      break;
  }

  Adjacency adj(n, self_loops, std::move(nbrs));
  if (!adj.connected())
  {
    throw ConfigError("graph not connected");
  }
  return adj;
}

Topology::Topology(Adjacency adjacency, Eigen::MatrixXd weights, std::string label)
  : adjacency_(std::move(adjacency)), weights_(std::move(weights)), label_(std::move(label))
{
  const int n = adjacency_.size();
  if (weights_.rows() != n || weights_.cols() != n)
  {
    throw ConfigError("structure matrix size does not match the graph");
  }
  if (weights_ != weights_.transpose())
  {
    throw ConfigError("structure matrix is not symmetric");
  }
  if (weights_.minCoeff() < 0.0)
  {
    throw ConfigError("structure matrix has negative entries");
  }
  for (int i = 0; i < n; ++i)
  {
    if (std::abs(weights_.row(i).sum() - 1.0) > 1e-10)
    {
      throw ConfigError("structure matrix row " + std::to_string(i) + " does not sum to 1");
    }
  }

  rows_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      const double w = weights_(i, j);
      if (w == 0.0)
      {
        continue;
      }
      if (i != j && !adjacency_.adjacent(i, j))
      {
        throw ConfigError("structure matrix has weight on a non-edge");
      }
      rows_[static_cast<std::size_t>(i)].push_back({j, w});
    }
  }

  lambda2_ = second_eigenvalue(weights_);
  if (!(lambda2_ < 1.0 - 1e-12))
  {
    throw ConfigError("disconnected or periodic structure matrix (|lambda2| = " +
                      std::to_string(lambda2_) + ")");
  }
}

Topology Topology::from_weights(const Eigen::MatrixXd &weights, std::string label)
{
  if (weights.rows() != weights.cols() || weights.rows() < 1)
  {
    throw ConfigError("structure matrix must be square and non-empty");
  }
  const int n = static_cast<int>(weights.rows());
  std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(n));
  bool loops = true;
  for (int i = 0; i < n; ++i)
  {
    loops = loops && weights(i, i) > 0.0;
    for (int j = 0; j < n; ++j)
    {
      if (i != j && (weights(i, j) != 0.0 || weights(j, i) != 0.0))
      {
        nbrs[static_cast<std::size_t>(i)].push_back(j);
      }
    }
  }
  Adjacency adj(n, loops, std::move(nbrs));
  if (!adj.connected())
  {
    throw ConfigError("graph not connected");
  }
  return Topology(std::move(adj), weights, std::move(label));
}

Eigen::VectorXd Topology::apply(const Eigen::VectorXd &x) const
{
  Eigen::VectorXd y(x.size());
  for (std::size_t i = 0; i < rows_.size(); ++i)
  {
    double acc = 0.0;
    for (const Entry &e : rows_[i])
    {
      acc += e.weight * x(e.col);
    }
    y(static_cast<Eigen::Index>(i)) = acc;
  }
  return y;
}

Topology structure_matrix(const Adjacency &adjacency, std::string label)
{
  const int n = adjacency.size();
  const double denom = static_cast<double>(adjacency.max_degree() + 1);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
  {
    for (int j : adjacency.neighbors(i))
    {
      w(i, j) = 1.0 / denom;
    }
  }
  // Diagonal computed from the same expression on every row so that the
  // k-regular case gives exactly 1/(k+1).
  for (int i = 0; i < n; ++i)
  {
    w(i, i) = (denom - adjacency.degree(i)) / denom;
  }
  return Topology(adjacency, std::move(w), std::move(label));
}

Topology make_topology(const GraphSpec &spec, int n, bool self_loops)
{
  return structure_matrix(build_graph(spec, n, self_loops), spec.label());
}

double second_eigenvalue(const Eigen::MatrixXd &w)
{
  if (w.rows() != w.cols())
  {
    throw ConfigError("second_eigenvalue: matrix is not square");
  }
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 0.0)
  {
    throw ConfigError("second_eigenvalue: matrix is not symmetric");
  }
  if (w.rows() == 1)
  {
    return 0.0;
  }
  const Eigen::VectorXd values = jacobi_eigen(w).values;
  Eigen::Index top = 0;
  (values.array() - 1.0).abs().minCoeff(&top);
  double result = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k)
  {
    if (k != top)
    {
      result = std::max(result, std::abs(values(k)));
    }
  }
  return result;
}

}  // namespace malinucb
