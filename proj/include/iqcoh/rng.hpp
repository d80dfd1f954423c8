#ifndef IQCOH_RNG_HPP
#define IQCOH_RNG_HPP

#include <complex>
#include <cstdint>

namespace iqcoh {

/// Counter-based 64-bit generator (SplitMix64 output function over an
/// incrementing counter). The same (seed, stream) pair produces the same
/// sequence on every platform and thread count, which is what the
/// reproducibility guarantees of the samplers and suites rest on.
///
/// Stream splitting: stream(seed, k) hashes the pair (seed, k) into an
/// independent counter key, so parallel trials can each own a generator
/// without coordination.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix(seed ^ 0x9E3779B97F4A7C15ULL)) {}

    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        Rng r(seed);
        r.state_ = mix(r.state_ + mix(stream_id + 0xBF58476D1CE4E5B9ULL));
        return r;
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform in [0, 1) with 53 bits of mantissa.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (no cached spare, so the stream is a
    /// pure function of the draw count).
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Complex standard normal, E|z|^2 = 1.
    std::complex<double> cgaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re * 0.7071067811865475244, im * 0.7071067811865475244};
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace iqcoh

#endif
