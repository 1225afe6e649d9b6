#pragma once

#include <cstdint>

namespace homgibbs {

/// Counter-based 64-bit generator.
///
/// Output k of stream (seed, stream) is splitmix64_mix(key + (k + 1) * golden)
/// with key = splitmix64_mix(seed ^ splitmix64_mix(stream + golden)), where
/// splitmix64_mix is the SplitMix64 finaliser and golden = 0x9E3779B97F4A7C15.
/// uniform() uses the top 53 bits; below(n) is Lemire's multiply-shift with
/// rejection. Everything is integer arithmetic, so sequences are identical on
/// every platform.
class Rng {
public:
    static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix(seed ^ mix(stream + golden))) {}

    /// Independent generator for replica or start `index` derived from this one's key.
    Rng split(std::uint64_t index) const
    {
        Rng out(0);
        out.key_ = mix(key_ ^ mix(index * golden + 0x632BE59BD9B4E019ULL));
        return out;
    }

    std::uint64_t next() { return mix(key_ + (++counter_) * golden); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on {0, ..., n - 1}; n must be positive.
    std::uint64_t below(std::uint64_t n)
    {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace homgibbs
