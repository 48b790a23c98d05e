#pragma once

#include <cmath>
#include <cstdint>

namespace netlearn {

// splitmix64. A std::mt19937_64 would be just as portable, but
// std::normal_distribution is implementation-defined, and the reproducibility
// contract here is bitwise: the same seed must give the same records on any
// toolchain. So both the generator and the Gaussian transform are spelled out.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform on [0,1) with 53 random bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Box-Muller, cosine branch only: every draw consumes exactly two
    // uniforms, so the value of draw #k depends only on k and the seed.
    double gaussian() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        // 1-u1 lies in (0,1], so the log never sees zero
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(6.28318530717958647693 * u2);
    }
};

// one splitmix64 scrambling round, used as the seed-mixing hash
inline std::uint64_t mix_bits(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key) {
    return mix_bits(base + 0x9e3779b97f4a7c15ull * (key + 1));
}

// per-trial seed: a pure function of (master seed, trial index), so trials can
// run on any number of threads in any order
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return derive_seed(master_seed, trial_index);
}

// What a per-agent stream is consumed for. Separate purposes get disjoint
// streams, so e.g. toggling the noise rate cannot shift anyone's signal draw.
enum class Draw : std::uint64_t {
    state = 1,     // trial-level state draw (agent slot 0)
    signal = 2,
    links = 3,
    behavior = 4,  // naive-vs-autarkic assignment in mixed populations
    noise = 5,     // uniform action flip
};

// per-agent stream: a pure function of (trial seed, agent position, purpose)
inline SplitMix64 agent_stream(std::uint64_t tseed, int position, Draw purpose) {
    const std::uint64_t a = derive_seed(tseed, static_cast<std::uint64_t>(position));
    return SplitMix64(derive_seed(a, static_cast<std::uint64_t>(purpose)));
}

}  // namespace netlearn
