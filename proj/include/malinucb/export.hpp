#ifndef MALINUCB_EXPORT_HPP
#define MALINUCB_EXPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "malinucb/experiment.hpp"
#include "malinucb/simulation.hpp"

namespace malinucb
{

inline constexpr const char *kCsvHeader =
    "config_id,round,mean_cum_regret,stderr,lambda2,spectral_gap,n_agents,topology";

// One row per round per config. Doubles use the shortest representation that
// parses back to the same value.
std::string csv_text(const std::vector<AggregateResult> &results);
void export_csv(const std::vector<AggregateResult> &results, const std::string &path);

struct CsvRow
{
  std::string config_id;
  long round = 0;
  double mean_cum_regret = 0.0;
  double std_error = 0.0;
  double lambda2 = 0.0;
  double spectral_gap = 0.0;
  int n_agents = 0;
  std::string topology;
};

std::vector<CsvRow> parse_csv(const std::string &text);
std::vector<CsvRow> read_csv(const std::string &path);

struct PlotOptions
{
  std::string title = "Mean cumulative regret";
  std::string x_label;  // defaults from the x-axis mode
  std::string y_label = "mean cumulative regret";
  int width = 800;
  int height = 500;
  std::size_t max_points = 1000;  // per polyline
};

// One polyline per result, in input order, with axes and a legend naming the
// topology and N.
std::string svg_text(const std::vector<AggregateResult> &results, const PlotOptions &options = {});
void export_plot(const std::vector<AggregateResult> &results, const std::string &path,
                 const PlotOptions &options = {});

// One JSON object (no trailing newline) describing an episode.
std::string episode_json(const EpisodeRecord &record, int rep, std::uint64_t seed);

}  // namespace malinucb

#endif  // MALINUCB_EXPORT_HPP
