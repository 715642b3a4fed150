#ifndef MALINUCB_CONFIG_HPP
#define MALINUCB_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "malinucb/bandit_core.hpp"
#include "malinucb/graph_topology.hpp"
#include "malinucb/simulation.hpp"

namespace malinucb
{

enum class XAxis
{
  rounds,
  episodes,
};

enum class ActionKind
{
  hypercube,
  finite,
};

//
// Every knob of an experiment. Defaults reproduce the reference setup:
// d = 4, D = [-1, 1]^4, R = 0.1, delta = 1/(4T), lambda = max(1, L^2),
// 100 repetitions.
//
// Text form is one `key = value` per line with `#` comments:
//
//   n_agents = 16          horizon = 10000        dim = 4
//   topology = complete    # cycle | path | k-regular | 8-regular | custom
//   degree = 4             # for a bare "k-regular"
//   edge_file = g.txt      # for "custom"
//   self_loops = true
//   lambda = auto          delta = auto
//   noise_scale = 0.1      noise = gaussian   # | uniform
//   param_bound = 1
//   action_set = hypercube # | finite
//   half_width = 1
//   actions = 1,0; 0,1     # finite sets, semicolon separated
//   seed = 1               repetitions = 100
//   regret_convention = no-reward   # | hold-last-action
//   normalize_ground_truth = true
//   x_axis = rounds        # | episodes
//
struct ExperimentConfig
{
  int n_agents = 4;
  long horizon = 10000;
  int dim = 4;
  GraphSpec topology;
  int degree = 4;
  std::string edge_file;
  bool self_loops = true;
  std::optional<double> lambda;
  std::optional<double> delta;
  double noise_scale = 0.1;
  double param_bound = 1.0;
  ActionKind action_kind = ActionKind::hypercube;
  double half_width = 1.0;
  std::vector<Eigen::VectorXd> finite_actions;
  std::uint64_t seed = 1;
  int repetitions = 100;
  RegretConvention convention = RegretConvention::no_reward;
  NoiseKind noise = NoiseKind::gaussian;
  bool normalize_ground_truth = true;
  XAxis x_axis = XAxis::rounds;

  ActionSet action_set() const;
  double resolved_lambda() const;
  double resolved_delta() const;
  ProblemConstants constants() const;
  SimulationSettings simulation_settings() const;
  // Builds (and for custom graphs loads) the network.
  Topology build_topology() const;
  // Throws ConfigError on the first invalid field.
  void validate() const;
  std::string topology_label() const;
  // Canonical key = value dump, parseable by parse_config.
  std::string to_text() const;
};

// Sets one field from its text form. Throws ConfigError for unknown keys or
// malformed values.
void apply_setting(ExperimentConfig &config, const std::string &key, const std::string &value);

ExperimentConfig parse_config(std::istream &in, const std::string &source = "<config>");
ExperimentConfig load_config(const std::string &path);

}  // namespace malinucb

#endif  // MALINUCB_CONFIG_HPP
