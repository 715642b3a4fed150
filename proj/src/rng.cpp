#include "malinucb/rng.hpp"

namespace malinucb
{

Rng make_rng(std::uint64_t seed, RngStream stream)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x6d61u};
  return Rng(seq);
}

}  // namespace malinucb
