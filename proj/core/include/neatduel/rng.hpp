#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace neatduel {

// Seeded random stream. The engine is std::mt19937_64; the mapping from raw
// engine output to doubles and indices is our own so that a stream produces
// the same values on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform in [0, n). n must be > 0.
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive independent, named stream seeds from
// a master seed: derive_seed(master, {stream_tag, generation, population}).
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

// Stream tags for derive_seed. Values are part of the reproducibility contract.
namespace stream {
inline constexpr std::uint64_t kInitialPopulation = 1;
inline constexpr std::uint64_t kSpeciation = 2;
inline constexpr std::uint64_t kParasites = 3;
inline constexpr std::uint64_t kReproduction = 4;
inline constexpr std::uint64_t kCoinFlip = 5;
}  // namespace stream

}  // namespace neatduel
