#ifndef MALINUCB_RNG_HPP
#define MALINUCB_RNG_HPP

#include <cstdint>
#include <random>

namespace malinucb
{

using Rng = std::mt19937_64;

// Independent random streams of one run. The numeric values are part of the
// reproducibility contract; do not renumber.
enum class RngStream : std::uint32_t
{
  ground_truth = 1,
  noise = 2,
  coordinator = 3,
  bootstrap = 4,
};

// Generator for (seed, stream), keyed through std::seed_seq so that nearby
// seeds and different streams give unrelated sequences.
Rng make_rng(std::uint64_t seed, RngStream stream);

}  // namespace malinucb

#endif  // MALINUCB_RNG_HPP
