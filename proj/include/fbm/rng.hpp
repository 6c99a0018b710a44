#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace fbm {

// Standard-normal stream with a fully pinned draw sequence. Box-Muller on top
// of mt19937_64 rather than std::normal_distribution, whose algorithm is
// implementation-defined and would silently invalidate every seed-frozen
// expectation in the test suite. Each Gaussian pair consumes exactly two raw
// 64-bit draws, so a consumer needing an even number of variates uses a
// predictable amount of generator state.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) {
        seed_with(seed, 0);
    }

    // Independent stream addressed by (seed, stream). Parallel path generation
    // assigns one stream per path index, which makes output independent of the
    // worker count.
    GaussianStream(std::uint64_t seed, std::uint64_t stream) {
        seed_with(seed, stream);
    }

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53; // (0,1]
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;          // [0,1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    void fill(double* out, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) out[i] = (*this)();
    }

private:
    void seed_with(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed & 0xffffffffu),
            static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(stream & 0xffffffffu),
            static_cast<std::uint32_t>(stream >> 32)};
        gen_.seed(seq);
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace fbm
