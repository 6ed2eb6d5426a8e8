#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace iclh {

/// Deterministic random source. The engine is std::mt19937_64 (fully
/// specified by the standard); the distributions below are hand-rolled so
/// that a seed produces the same stream with any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for (master seed, a, b), e.g. (generation, slot).
    static Rng stream(std::uint64_t master, std::uint64_t a, std::uint64_t b);

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool coin() { return (engine_() >> 63) != 0; }

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finaliser, used to derive stream seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace iclh
