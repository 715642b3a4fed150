#include "malinucb/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "malinucb/errors.hpp"

namespace malinucb
{

namespace
{

void append_double(std::string &out, double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

std::string fixed(double v, int digits)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
  return std::string(buf, ptr);
}

double parse_double(const std::string &cell)
{
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
  {
    throw ConfigError("csv: bad number '" + cell + "'");
  }
  return v;
}

std::string xml_escape(const std::string &s)
{
  std::string out;
  for (char c : s)
  {
    switch (c)
    {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

void write_file(const std::string &path, const std::string &content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw IoError(path, "cannot open output file");
  }
  out << content;
  if (!out)
  {
    throw IoError(path, "failed writing output file");
  }
}

nlohmann::json to_json(const Eigen::VectorXd &v)
{
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Round axis limit up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v)
{
  if (!(v > 0.0))
  {
    return 1.0;
  }
  const double p = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
  {
    if (m * p >= v)
    {
      return m * p;
    }
  }
  return 10.0 * p;
}

std::string tick_label(double v)
{
  if (v >= 1000.0 || v == std::floor(v))
  {
    return fixed(v, 0);
  }
  return fixed(v, 2);
}

constexpr const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string csv_text(const std::vector<AggregateResult> &results)
{
  std::string out = kCsvHeader;
  out += '\n';
  for (const AggregateResult &agg : results)
  {
    for (std::size_t k = 0; k < agg.mean.size(); ++k)
    {
      out += agg.config_id;
      out += ',';
      out += std::to_string(k + 1);
      out += ',';
      append_double(out, agg.mean[k]);
      out += ',';
      append_double(out, k < agg.std_error.size() ? agg.std_error[k] : 0.0);
      out += ',';
      append_double(out, agg.lambda2);
      out += ',';
      append_double(out, agg.spectral_gap);
      out += ',';
      out += std::to_string(agg.n_agents);
      out += ',';
      out += agg.topology;
      out += '\n';
    }
  }
  return out;
}

void export_csv(const std::vector<AggregateResult> &results, const std::string &path)
{
  write_file(path, csv_text(results));
}

std::vector<CsvRow> parse_csv(const std::string &text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
  {
    throw ConfigError("csv: missing or unexpected header");
  }
  std::vector<CsvRow> rows;
  while (std::getline(in, line))
  {
    if (line.empty())
    {
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ','))
    {
      cells.push_back(cell);
    }
    if (cells.size() != 8)
    {
      throw ConfigError("csv: expected 8 columns in '" + line + "'");
    }
    CsvRow row;
    row.config_id = cells[0];
    row.round = static_cast<long>(parse_double(cells[1]));
    row.mean_cum_regret = parse_double(cells[2]);
    row.std_error = parse_double(cells[3]);
    row.lambda2 = parse_double(cells[4]);
    row.spectral_gap = parse_double(cells[5]);
    row.n_agents = static_cast<int>(parse_double(cells[6]));
    row.topology = cells[7];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CsvRow> read_csv(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw IoError(path, "cannot open csv");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string svg_text(const std::vector<AggregateResult> &results, const PlotOptions &options)
{
  const double left = 80.0;
  const double right = 190.0;
  const double top = 40.0;
  const double bottom = 60.0;
  const double w = options.width;
  const double h = options.height;
  const double plot_w = w - left - right;
  const double plot_h = h - top - bottom;

  std::size_t x_max = 1;
  double y_max = 0.0;
  for (const auto &agg : results)
  {
    x_max = std::max(x_max, agg.mean.size());
    for (double v : agg.mean)
    {
      y_max = std::max(y_max, v);
    }
  }
  const double x_lim = nice_ceiling(static_cast<double>(x_max));
  const double y_lim = nice_ceiling(y_max);
  auto px = [&](double x) { return left + plot_w * x / x_lim; };
  auto py = [&](double y) { return top + plot_h * (1.0 - y / y_lim); };

  std::string x_label = options.x_label;
  if (x_label.empty())
  {
    const bool episodes = !results.empty() && results.front().x_axis == XAxis::episodes;
    x_label = episodes ? "episode s" : "round t";
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
      << options.height << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text class=\"title\" x=\"" << fixed(left + plot_w / 2, 1) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(options.title) << "</text>\n";

  // Axes and ticks.
  svg << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << fixed(left, 1) << "\" y1=\"" << fixed(top + plot_h, 1) << "\" x2=\""
      << fixed(left + plot_w, 1) << "\" y2=\"" << fixed(top + plot_h, 1) << "\"/>\n";
  svg << "<line x1=\"" << fixed(left, 1) << "\" y1=\"" << fixed(top, 1) << "\" x2=\"" << fixed(left, 1)
      << "\" y2=\"" << fixed(top + plot_h, 1) << "\"/>\n";
  svg << "</g>\n";
  svg << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 5; ++k)
  {
    const double xv = x_lim * k / 5.0;
    const double yv = y_lim * k / 5.0;
    svg << "<text x=\"" << fixed(px(xv), 1) << "\" y=\"" << fixed(top + plot_h + 16, 1)
        << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    svg << "<text x=\"" << fixed(left - 6, 1) << "\" y=\"" << fixed(py(yv) + 4, 1)
        << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<text class=\"xlabel\" x=\"" << fixed(left + plot_w / 2, 1) << "\" y=\"" << fixed(h - 16, 1)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(x_label)
      << "</text>\n";
  svg << "<text class=\"ylabel\" x=\"18\" y=\"" << fixed(top + plot_h / 2, 1)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
      << fixed(top + plot_h / 2, 1) << ")\">" << xml_escape(options.y_label) << "</text>\n";

  for (std::size_t r = 0; r < results.size(); ++r)
  {
    const AggregateResult &agg = results[r];
    const char *color = kPalette[r % std::size(kPalette)];
    const std::size_t n = agg.mean.size();
    const std::size_t stride = std::max<std::size_t>(1, (n + options.max_points - 1) / options.max_points);
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" data-config=\""
        << xml_escape(agg.config_id) << "\" points=\"" << fixed(px(0.0), 1) << ',' << fixed(py(0.0), 1);
    for (std::size_t k = 0; k < n; k += stride)
    {
      svg << ' ' << fixed(px(static_cast<double>(k + 1)), 1) << ',' << fixed(py(agg.mean[k]), 1);
    }
    if (n > 0 && (n - 1) % stride != 0)
    {
      svg << ' ' << fixed(px(static_cast<double>(n)), 1) << ',' << fixed(py(agg.mean[n - 1]), 1);
    }
    svg << "\"/>\n";
  }

  svg << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t r = 0; r < results.size(); ++r)
  {
    const AggregateResult &agg = results[r];
    const double y = top + 10.0 + 20.0 * static_cast<double>(r);
    const double x = left + plot_w + 15.0;
    svg << "<line x1=\"" << fixed(x, 1) << "\" y1=\"" << fixed(y, 1) << "\" x2=\"" << fixed(x + 20, 1)
        << "\" y2=\"" << fixed(y, 1) << "\" stroke=\"" << kPalette[r % std::size(kPalette)]
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fixed(x + 26, 1) << "\" y=\"" << fixed(y + 4, 1) << "\">"
        << xml_escape(agg.topology + ", N=" + std::to_string(agg.n_agents)) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void export_plot(const std::vector<AggregateResult> &results, const std::string &path,
                 const PlotOptions &options)
{
  write_file(path, svg_text(results, options));
}

std::string episode_json(const EpisodeRecord &record, int rep, std::uint64_t seed)
{
  nlohmann::ordered_json j;
  j["rep"] = rep;
  j["seed"] = seed;
  j["s"] = record.s;
  j["t_start"] = record.t_start;
  j["agent"] = record.agent;
  j["action"] = to_json(record.action);
  j["raw_rewards"] = to_json(record.raw_rewards);
  j["consensus_rewards"] = to_json(record.consensus_rewards);
  j["q"] = record.q;
  j["q_scheduled"] = record.q_scheduled;
  j["inst_regret_action"] = record.inst_regret_action;
  j["inst_regret_comm"] = record.inst_regret_comm;
  j["ucb_value"] = record.ucb_value;
  j["truncated"] = record.truncated;
  if (!record.consensus_trace.empty())
  {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto &round : record.consensus_trace)
    {
      trace.push_back(to_json(round));
    }
    j["consensus_trace"] = std::move(trace);
  }
  return j.dump();
}

}  // namespace malinucb
