#include "neatduel/rng.hpp"

namespace neatduel {

__extension__ using uint128 = unsigned __int128;

std::size_t Rng::index(std::size_t n) {
    // Lemire's multiply-shift; the bias is below 2^-64 * n.
    const auto product = static_cast<uint128>(engine_()) * n;
    return static_cast<std::size_t>(product >> 64);
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(master);
    for (const auto part : path) h = mix64(h ^ mix64(part));
    return h;
}

}  // namespace neatduel
