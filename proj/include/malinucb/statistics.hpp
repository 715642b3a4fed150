#ifndef MALINUCB_STATISTICS_HPP
#define MALINUCB_STATISTICS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace malinucb
{

double mean(std::span<const double> xs);

// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> xs);

// Mean ranks, ties share the average rank.
std::vector<double> ranks(std::span<const double> xs);

double spearman(std::span<const double> xs, std::span<const double> ys);

// Fraction of bootstrap resamples in which mean(a*) > mean(b*), resampling
// both groups independently with replacement.
double bootstrap_greater_probability(std::span<const double> a, std::span<const double> b,
                                     int resamples, std::uint64_t seed);

}  // namespace malinucb

#endif  // MALINUCB_STATISTICS_HPP
