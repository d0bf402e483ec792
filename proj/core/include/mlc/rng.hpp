#pragma once

#include <cstdint>

namespace mlc {

// splitmix64: tiny, seedable, identical across platforms. All randomized
// sampling in the library goes through this generator so runs are
// reproducible from a single uint64 seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Unbiased via rejection; n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = n * ((~0ULL) / n);
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Derived stream, independent of how many draws were made from *this*.
    // Used to give each sample index its own generator so results do not
    // depend on evaluation order.
    Rng fork(std::uint64_t stream) const {
        Rng r(state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 0x632be59bd9b4e019ULL)));
        r.next();
        return r;
    }

private:
    std::uint64_t state_;
};

} // namespace mlc
