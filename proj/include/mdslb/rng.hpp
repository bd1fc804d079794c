#ifndef MDSLB_RNG_HPP
#define MDSLB_RNG_HPP

#include <cstdint>
#include <random>

namespace mdslb {

using Rng = std::mt19937_64;

// splitmix64 finalizer, used only to derive well separated seeds.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic per-replicate seed: one master seed, a stream tag to keep
// e.g. chain replicates and diffusion replicates apart, and the replicate
// index. Same scheme regardless of thread count, so parallel runs reproduce
// serial ones.
inline uint64_t derive_seed(uint64_t master, uint64_t stream, uint64_t index) {
  uint64_t h = splitmix64(master ^ (0xa24baed4963ee407ull * (stream + 1)));
  return splitmix64(h ^ (0x9fb21c651e98df25ull * (index + 1)));
}

} // namespace mdslb

#endif
