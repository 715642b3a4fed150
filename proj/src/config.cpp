#include "malinucb/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "malinucb/errors.hpp"

namespace malinucb
{

namespace
{

std::string trim(const std::string &s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
  {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double to_double(const std::string &key, const std::string &value)
{
  double out = 0.0;
  const char *end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out))
  {
    throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

template <typename Int>
Int to_integer(const std::string &key, const std::string &value)
{
  Int out = 0;
  const char *end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
  {
    throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

bool to_bool(const std::string &key, const std::string &value)
{
  const std::string v = lower(value);
  if (v == "true" || v == "yes" || v == "on" || v == "1")
  {
    return true;
  }
  if (v == "false" || v == "no" || v == "off" || v == "0")
  {
    return false;
  }
  throw ConfigError("'" + key + "' expects true/false, got '" + value + "'");
}

std::optional<double> to_auto_double(const std::string &key, const std::string &value)
{
  if (lower(value) == "auto")
  {
    return std::nullopt;
  }
  return to_double(key, value);
}

std::vector<Eigen::VectorXd> to_actions(const std::string &key, const std::string &value)
{
  std::vector<Eigen::VectorXd> out;
  std::stringstream rows(value);
  std::string row;
  while (std::getline(rows, row, ';'))
  {
    row = trim(row);
    if (row.empty())
    {
      continue;
    }
    std::vector<double> coords;
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ','))
    {
      coords.push_back(to_double(key, trim(cell)));
    }
    out.emplace_back(Eigen::Map<Eigen::VectorXd>(coords.data(), static_cast<Eigen::Index>(coords.size())));
  }
  return out;
}

std::string format_double(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

ActionSet ExperimentConfig::action_set() const
{
  if (action_kind == ActionKind::hypercube)
  {
    return ActionSet::hypercube(dim, half_width);
  }
  return ActionSet::finite(finite_actions);
}

double ExperimentConfig::resolved_lambda() const
{
  if (lambda)
  {
    return *lambda;
  }
  const double l = action_set().norm_bound();
  return std::max(1.0, l * l);
}

double ExperimentConfig::resolved_delta() const
{
  return delta ? *delta : 1.0 / (4.0 * static_cast<double>(horizon));
}

ProblemConstants ExperimentConfig::constants() const
{
  ProblemConstants c;
  c.R = noise_scale;
  c.S = param_bound;
  c.L = action_set().norm_bound();
  c.d = dim;
  c.N = n_agents;
  c.lambda = resolved_lambda();
  c.delta = resolved_delta();
  return c;
}

SimulationSettings ExperimentConfig::simulation_settings() const
{
  SimulationSettings s;
  s.constants = constants();
  s.horizon = horizon;
  s.convention = convention;
  s.noise = noise;
  s.normalize_ground_truth = normalize_ground_truth;
  return s;
}

Topology ExperimentConfig::build_topology() const
{
  GraphSpec spec = topology;
  if (spec.kind == GraphKind::custom)
  {
    if (edge_file.empty())
    {
      throw ConfigError("custom topology needs edge_file");
    }
    const int n = load_edge_list(edge_file, spec);
    if (n != n_agents)
    {
      throw ConfigError("edge file " + edge_file + " has " + std::to_string(n) +
                        " nodes but n_agents = " + std::to_string(n_agents));
    }
  }
  return make_topology(spec, n_agents, self_loops);
}

std::string ExperimentConfig::topology_label() const { return topology.label(); }

void ExperimentConfig::validate() const
{
  if (n_agents < 1)
  {
    throw ConfigError("n_agents must be >= 1");
  }
  if (horizon < 1)
  {
    throw ConfigError("horizon must be >= 1");
  }
  if (dim < 1)
  {
    throw ConfigError("dim must be >= 1");
  }
  if (repetitions < 1)
  {
    throw ConfigError("repetitions must be >= 1");
  }
  if (action_kind == ActionKind::finite)
  {
    const ActionSet set = action_set();
    if (set.dim() != dim)
    {
      throw ConfigError("finite actions have dimension " + std::to_string(set.dim()) +
                        " but dim = " + std::to_string(dim));
    }
  }
  constants().validate();
}

std::string ExperimentConfig::to_text() const
{
  std::ostringstream out;
  out << "n_agents = " << n_agents << '\n'
      << "horizon = " << horizon << '\n'
      << "dim = " << dim << '\n'
      << "topology = " << topology.label() << '\n'
      << "degree = " << degree << '\n';
  if (!edge_file.empty())
  {
    out << "edge_file = " << edge_file << '\n';
  }
  out << "self_loops = " << (self_loops ? "true" : "false") << '\n'
      << "lambda = " << (lambda ? format_double(*lambda) : "auto") << '\n'
      << "delta = " << (delta ? format_double(*delta) : "auto") << '\n'
      << "noise_scale = " << format_double(noise_scale) << '\n'
      << "noise = " << (noise == NoiseKind::gaussian ? "gaussian" : "uniform") << '\n'
      << "param_bound = " << format_double(param_bound) << '\n'
      << "action_set = " << (action_kind == ActionKind::hypercube ? "hypercube" : "finite") << '\n'
      << "half_width = " << format_double(half_width) << '\n';
  if (!finite_actions.empty())
  {
    out << "actions = ";
    for (std::size_t k = 0; k < finite_actions.size(); ++k)
    {
      out << (k ? "; " : "");
      for (Eigen::Index j = 0; j < finite_actions[k].size(); ++j)
      {
        out << (j ? "," : "") << format_double(finite_actions[k](j));
      }
    }
    out << '\n';
  }
  out << "seed = " << seed << '\n'
      << "repetitions = " << repetitions << '\n'
      << "regret_convention = "
      << (convention == RegretConvention::no_reward ? "no-reward" : "hold-last-action") << '\n'
      << "normalize_ground_truth = " << (normalize_ground_truth ? "true" : "false") << '\n'
      << "x_axis = " << (x_axis == XAxis::rounds ? "rounds" : "episodes") << '\n';
  return out.str();
}

void apply_setting(ExperimentConfig &config, const std::string &raw_key, const std::string &raw_value)
{
  const std::string key = lower(trim(raw_key));
  const std::string value = trim(raw_value);

  if (key == "n_agents" || key == "n")
  {
    config.n_agents = to_integer<int>(key, value);
  }
  else if (key == "horizon" || key == "t")
  {
    config.horizon = to_integer<long>(key, value);
  }
  else if (key == "dim" || key == "d")
  {
    config.dim = to_integer<int>(key, value);
  }
  else if (key == "topology")
  {
    config.topology = parse_graph_kind(value, config.degree);
  }
  else if (key == "degree" || key == "k")
  {
    config.degree = to_integer<int>(key, value);
    if (config.topology.kind == GraphKind::k_regular)
    {
      config.topology.degree = config.degree;
    }
  }
  else if (key == "edge_file")
  {
    config.edge_file = value;
  }
  else if (key == "self_loops")
  {
    config.self_loops = to_bool(key, value);
  }
  else if (key == "lambda")
  {
    config.lambda = to_auto_double(key, value);
  }
  else if (key == "delta")
  {
    config.delta = to_auto_double(key, value);
  }
  else if (key == "noise_scale" || key == "r")
  {
    config.noise_scale = to_double(key, value);
  }
  else if (key == "noise")
  {
    const std::string v = lower(value);
    if (v == "gaussian")
    {
      config.noise = NoiseKind::gaussian;
    }
    else if (v == "uniform")
    {
      config.noise = NoiseKind::uniform;
    }
    else
    {
      throw ConfigError("noise must be gaussian or uniform, got '" + value + "'");
    }
  }
  else if (key == "param_bound" || key == "s")
  {
    config.param_bound = to_double(key, value);
  }
  else if (key == "action_set")
  {
    const std::string v = lower(value);
    if (v == "hypercube")
    {
      config.action_kind = ActionKind::hypercube;
    }
    else if (v == "finite")
    {
      config.action_kind = ActionKind::finite;
    }
    else
    {
      throw ConfigError("action_set must be hypercube or finite, got '" + value + "'");
    }
  }
  else if (key == "half_width")
  {
    config.half_width = to_double(key, value);
  }
  else if (key == "actions")
  {
    config.finite_actions = to_actions(key, value);
  }
  else if (key == "seed")
  {
    config.seed = to_integer<std::uint64_t>(key, value);
  }
  else if (key == "repetitions")
  {
    config.repetitions = to_integer<int>(key, value);
  }
  else if (key == "regret_convention")
  {
    const std::string v = lower(value);
    if (v == "no-reward" || v == "no_reward")
    {
      config.convention = RegretConvention::no_reward;
    }
    else if (v == "hold-last-action" || v == "hold_last_action")
    {
      config.convention = RegretConvention::hold_last_action;
    }
    else
    {
      throw ConfigError("regret_convention must be no-reward or hold-last-action, got '" + value +
                        "'");
    }
  }
  else if (key == "normalize_ground_truth")
  {
    config.normalize_ground_truth = to_bool(key, value);
  }
  else if (key == "x_axis")
  {
    const std::string v = lower(value);
    if (v == "rounds")
    {
      config.x_axis = XAxis::rounds;
    }
    else if (v == "episodes")
    {
      config.x_axis = XAxis::episodes;
    }
    else
    {
      throw ConfigError("x_axis must be rounds or episodes, got '" + value + "'");
    }
  }
  else
  {
    throw ConfigError("unknown config key '" + raw_key + "'");
  }
}

ExperimentConfig parse_config(std::istream &in, const std::string &source)
{
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
    {
      line.erase(hash);
    }
    if (trim(line).empty())
    {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try
    {
      apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    }
    catch (const IoError &)
    {
      throw;
    }
    catch (const Error &e)
    {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw IoError(path, "cannot open config file");
  }
  return parse_config(in, path);
}

}  // namespace malinucb
