#pragma once

#include <cstdint>
#include <random>

namespace qbisect {

// Seeded random stream. The uniform double is derived from the raw 64-bit
// output directly (not through std::uniform_real_distribution, whose results
// are implementation-defined), so identical seeds give identical streams on
// every platform.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, bound) by rejection-free scaling; bound must fit
    // comfortably below 2^53 (true for every index drawn here).
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
    }

  private:
    std::mt19937_64 gen_;
};

} // namespace qbisect
