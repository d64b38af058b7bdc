#pragma once
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace nidsbench {

// splitmix64 finalizer; used to derive independent, order-free seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed for the stream identified by (seed, tags...). Derivation depends only on
// the tag values, never on call order, so parallel schedules cannot reorder
// randomness.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t h = mix64(seed);
    for (auto t : tags) h = mix64(h ^ mix64(t + 0x632BE59BD9B4E019ULL));
    return h;
}

// Stable string tag for derive_seed (FNV-1a).
constexpr std::uint64_t tag(const char* s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    while (*s) {
        h ^= static_cast<unsigned char>(*s++);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Random stream with distributions defined here rather than by <random>, whose
// distribution algorithms are implementation-defined. mt19937_64 output itself
// is fully specified, so streams are bit-reproducible across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n); n > 0. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Box-Muller; one draw per call (the cosine branch only).
    double normal(double mean = 0.0, double sd = 1.0) {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double exponential(double rate = 1.0) {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return -std::log(u) / rate;
    }

    template <class T>
    void shuffle(std::span<T> v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    return Rng(derive_seed(seed, tags));
}

} // namespace nidsbench
