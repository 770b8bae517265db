#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "kgvqa/text.hpp"

namespace kgvqa {

using Rng = std::mt19937_64;

// Independent generator for one unit of work (a question, a balancing
// bucket, a split category). Depends only on (seed, key), so results do not
// change with processing order or thread count.
inline Rng substream(std::uint64_t seed, std::string_view key) {
  std::uint64_t h = stable_hash(key, 0xcbf29ce484222325ULL ^ (seed * 0x9e3779b97f4a7c15ULL));
  // splitmix64 finalizer to spread the FNV state before seeding.
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return Rng(h);
}

}  // namespace kgvqa
