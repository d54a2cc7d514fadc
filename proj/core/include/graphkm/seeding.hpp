#ifndef GRAPHKM_SEEDING_HPP
#define GRAPHKM_SEEDING_HPP

#include <cstdint>

namespace graphkm {

// splitmix64 finalizer; the basis for all derived seeds so that every random
// choice in a run is reproducible from the single run seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b));
}

// Seed of repetition `run` under a base CLI seed.
inline std::uint64_t repetition_seed(std::uint64_t base, std::uint64_t run) {
    return mix_seed(base, 0x72756e77ULL + run);
}

// Shuffle seed for the initialization mean over the whole sample.
inline std::uint64_t init_mean_seed(std::uint64_t run_seed) {
    return mix_seed(run_seed, 0x696e6974ULL);
}

// Random initial assignment shared by both k-means variants.
inline std::uint64_t initial_assignment_seed(std::uint64_t run_seed) {
    return mix_seed(run_seed, 0x61737367ULL);
}

// Shuffle seed for recomputing centroid `cluster` at iteration `iter`
// (1-based). Both k-means variants derive identically, so equal memberships
// imply bitwise equal centroids.
inline std::uint64_t centroid_seed(std::uint64_t run_seed, std::uint64_t cluster,
                                   std::uint64_t iter) {
    return mix_seed(mix_seed(run_seed, 0x6d65616eULL + cluster), iter);
}

}  // namespace graphkm

#endif
