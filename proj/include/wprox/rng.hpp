#pragma once

#include <cstdint>

namespace wprox {

// Counter-based 64-bit generator (splitmix64 finalizer applied to
// seed-offset counters). Every draw is a pure function of (seed, counter),
// so streams are reproducible bit-for-bit across platforms and can be
// partitioned by counter range.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t start_counter = 0)
        : seed_(seed), counter_(start_counter) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    static std::uint64_t value_at(std::uint64_t seed, std::uint64_t counter) {
        std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() { return value_at(seed_, counter_++); }

    // Uniform in [0, 1) with 53 random bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1]; safe as a log() argument.
    double next_uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_normal();

    // Derive an independent stream (e.g. one per experiment cell).
    CounterRng spawn(std::uint64_t stream_id) const {
        return CounterRng(value_at(seed_, 0xD1B54A32D192ED03ULL + stream_id));
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace wprox
