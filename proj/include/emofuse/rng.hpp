#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace emofuse {

// Seeded generator used for every randomized pipeline decision. The draw
// algorithms are fixed here (and documented in FORMATS.md) so selections and
// splits reproduce bit-for-bit across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform draw from [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // Uniform draw from [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Fisher-Yates, iterating from the back.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace emofuse
