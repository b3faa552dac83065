#pragma once

// Counter-seeded xoshiro256++ generator (Blackman & Vigna, public domain
// reference implementation) with splitmix64 state expansion. Replica streams
// are derived as seed ^ splitmix64(index + 1), so any (seed, replica) pair
// maps to a reproducible stream independent of thread scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

namespace glauberk {

inline constexpr const char* kRngAlgorithm = "xoshiro256++/splitmix64-streams";

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    Rng() : Rng(0) {}

    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : state_) w = splitmix64(sm);
    }

    // Stream for replica `index` of a run seeded with `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t sm = index + 1;
        return Rng(seed ^ splitmix64(sm));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1]; safe argument for log().
    double uniform01_open_left() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform01_open_left()) / rate; }

    // Uniform index in [0, n) via 128-bit multiply-shift.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    std::array<std::uint64_t, 4> save() const { return state_; }
    void restore(const std::array<std::uint64_t, 4>& s) { state_ = s; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace glauberk
