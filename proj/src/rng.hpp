#pragma once

#include <cstdint>
#include <span>

namespace wehrl {

// Counter-based generator: the i-th output is a pure function of (key, i),
// so substreams derived from (seed, index) are reproducible independent of
// thread count or draw order. Mixing is the SplitMix64 finalizer.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x8ad6'0af1'9c9f'1e1bULL)) {}

    // Independent stream addressed by (key, index); counter restarts at zero.
    CounterRng substream(std::uint64_t index) const {
        CounterRng r(0);
        r.key_ = mix(key_ + 0x9e37'79b9'7f4a'7c15ULL * (index + 1));
        r.counter_ = 0;
        return r;
    }

    std::uint64_t next_u64() { return mix(key_ + 0x9e37'79b9'7f4a'7c15ULL * ++counter_); }

    // Uniform in (0, 1]; never returns 0, safe under log().
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; draws are consumed in pairs.
    double next_normal();
    void fill_normals(std::span<double> out);

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58'476d'1ce4'e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d0'49bb'1331'11ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace wehrl
