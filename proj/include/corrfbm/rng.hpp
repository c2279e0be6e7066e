#pragma once

#include <cmath>
#include <cstdint>

namespace corrfbm {

// Replication seeding: (master, stream) uniquely determines the draw, so
// parallel replication order never changes results.
struct SeedSpec {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;
};

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 state expansion from (master, stream).
class Rng {
public:
    explicit Rng(SeedSpec seed) {
        std::uint64_t x = seed.master;
        (void)splitmix64(x);
        x ^= 0x510e527fade682d1ULL + seed.stream * 0x9e3779b97f4a7c15ULL;
        s_[0] = splitmix64(x);
        s_[1] = splitmix64(x);
        s_[2] = splitmix64(x);
        s_[3] = splitmix64(x);
        // all-zero state is invalid for xoshiro
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in (0,1), never exactly 0.
    double next_uniform() {
        return ((next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // standard normal via the polar method; spare cached.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_uniform() - 1.0;
            v = 2.0 * next_uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    void fill_normal(double* dst, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) dst[i] = next_normal();
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace corrfbm
