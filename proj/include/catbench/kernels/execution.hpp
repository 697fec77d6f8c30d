#pragma once

#include <cstdint>

namespace catbench::kernels {

// Every parallel kernel keeps a serial reference route. Tests compare the two
// and bench/ times them.
enum class Execution { serial, parallel };

// SplitMix64 finalizer; used to derive independent per-task seeds so that
// results do not depend on thread scheduling.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

int max_threads();

} // namespace catbench::kernels
