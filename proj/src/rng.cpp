#include "sdls/rng.hpp"

namespace sdls {

Engine make_engine(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Engine(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index) {
  auto eng = make_engine(seed, stream, index);
  return eng();
}

}  // namespace sdls
