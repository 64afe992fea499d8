#ifndef NETSHRINK_RNG_HPP
#define NETSHRINK_RNG_HPP

#include <cstdint>
#include <limits>

namespace netshrink {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based stream: the draw for (seed, a, b, c, d) depends only on the
// key, so replicas and epochs can be evaluated in any order or thread.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                  std::uint64_t c = 0, std::uint64_t d = 0) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    h = mix64(h ^ d);
    return h;
}

inline double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// URBG over a counter-derived state, for draws that consume a variable
// number of uniforms (Fisher-Yates, binomial, Poisson).
class CounterRng {
public:
    using result_type = std::uint64_t;
    explicit CounterRng(std::uint64_t key) : state_(key) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

}  // namespace netshrink

#endif
