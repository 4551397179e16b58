#pragma once

#include <cstdint>
#include <random>

namespace sdls {

// Random streams. Every generator is a std::mt19937_64 seeded through
// std::seed_seq from the words (seed_lo, seed_hi, stream, index_lo, index_hi),
// so any (seed, stream, index) triple names an independent, reproducible
// sequence regardless of how many other streams were consumed before it or
// on which thread.
using Engine = std::mt19937_64;

enum class Stream : std::uint32_t {
  model = 1,        // ground-truth quadratic
  sample = 2,       // one stream per sample index
  dataset = 3,      // per (N, trial) dataset seeds
  replacement = 4,  // fresh samples for replace-one experiments
  instance = 5,     // random test/benchmark instances
};

Engine make_engine(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

/// A 64-bit seed for a child computation, drawn from the named stream.
std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

}  // namespace sdls
