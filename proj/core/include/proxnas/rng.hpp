#pragma once

#include <cstdint>
#include <vector>

#include "proxnas/errors.hpp"

namespace proxnas {

// Counter-based generator (splitmix64 finalizer over seed + counter*gamma).
// The value stream is a pure function of (seed, counter), so a state can be
// split into independent child streams without touching the parent: dataset
// generation and training draws stay reproducible in isolation, and
// per-column work can be parallelized without changing results.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t counter = 0) noexcept
        : seed_(seed), counter_(counter) {}

    std::uint64_t next_u64() noexcept {
        counter_ += 1;
        return mix64(seed_ + counter_ * 0x9E3779B97F4A7C15ull);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi). One counter tick per call.
    double uniform(double lo, double hi);

    // Uniform integer on [0, bound) via multiply-shift. One counter tick.
    std::uint64_t below(std::uint64_t bound) noexcept {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    // Independent child stream; does not advance this state.
    Rng split(std::uint64_t stream) const noexcept {
        return Rng(derive(seed_, stream));
    }

    // Seed for a named child stream of `seed`.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept {
        return mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ull));
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    static std::uint64_t mix64(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t counter_;
};

// n draws uniform on [lo, hi); advances the counter by exactly n.
std::vector<double> uniform_fill(Rng& rng, std::size_t count, double lo, double hi);

}  // namespace proxnas
