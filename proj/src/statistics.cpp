#include "malinucb/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "malinucb/errors.hpp"
#include "malinucb/rng.hpp"

namespace malinucb
{

double mean(std::span<const double> xs)
{
  if (xs.empty())
  {
    return 0.0;
  }
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs)
{
  if (xs.size() < 2)
  {
    return 0.0;
  }
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs)
  {
    ss += (x - m) * (x - m);
  }
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::vector<double> ranks(std::span<const double> xs)
{
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> r(xs.size());
  std::size_t i = 0;
  while (i < order.size())
  {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]])
    {
      ++j;
    }
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k)
    {
      r[order[k]] = avg;
    }
    i = j + 1;
  }
  return r;
}

double spearman(std::span<const double> xs, std::span<const double> ys)
{
  if (xs.size() != ys.size() || xs.size() < 2)
  {
    throw ConfigError("spearman needs two equally sized samples of size >= 2");
  }
  const auto rx = ranks(xs);
  const auto ry = ranks(ys);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k)
  {
    sxy += (rx[k] - mx) * (ry[k] - my);
    sxx += (rx[k] - mx) * (rx[k] - mx);
    syy += (ry[k] - my) * (ry[k] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double bootstrap_greater_probability(std::span<const double> a, std::span<const double> b,
                                     int resamples, std::uint64_t seed)
{
  if (a.empty() || b.empty() || resamples < 1)
  {
    throw ConfigError("bootstrap needs non-empty samples");
  }
  Rng rng = make_rng(seed, RngStream::bootstrap);
  std::uniform_int_distribution<std::size_t> pick_a(0, a.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_b(0, b.size() - 1);
  int wins = 0;
  for (int r = 0; r < resamples; ++r)
  {
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
    {
      sa += a[pick_a(rng)];
    }
    for (std::size_t k = 0; k < b.size(); ++k)
    {
      sb += b[pick_b(rng)];
    }
    if (sa / static_cast<double>(a.size()) > sb / static_cast<double>(b.size()))
    {
      ++wins;
    }
  }
  return static_cast<double>(wins) / resamples;
}

}  // namespace malinucb
