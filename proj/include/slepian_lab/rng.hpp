#ifndef SLEPIAN_LAB_RNG_HPP
#define SLEPIAN_LAB_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace slepian_lab {

/// Identifies one reproducible random stream: a master seed plus a replicate
/// index. Streams with the same master seed and different indices are
/// statistically independent, and the mapping is pure, so results do not
/// depend on which thread runs which replicate.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) {
    return splitmix64(x);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

// Ziggurat tables for the standard normal (Marsaglia & Tsang layout,
// 128 layers, 2^31 scaling).
struct ZigguratTables {
    std::array<std::uint32_t, 128> kn{};
    std::array<double, 128> wn{};
    std::array<double, 128> fn{};
    ZigguratTables() {
        const double m1 = 2147483648.0;
        double dn = 3.442619855899, tn = dn;
        const double vn = 9.91256303526217e-3;
        double q = vn / std::exp(-0.5 * dn * dn);
        kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
        kn[1] = 0;
        wn[0] = q / m1;
        wn[127] = dn / m1;
        fn[0] = 1.0;
        fn[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
            kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
            tn = dn;
            fn[i] = std::exp(-0.5 * dn * dn);
            wn[i] = dn / m1;
        }
    }
};

inline const ZigguratTables& ziggurat_tables() {
    static const ZigguratTables t;
    return t;
}

}  // namespace detail

/// xoshiro256++ stream with SeedSpec-derived state and a ziggurat normal
/// sampler. Cheap to construct; one instance per replicate.
class RandomStream {
  public:
    explicit RandomStream(SeedSpec seed) {
        std::uint64_t h = seed.master_seed ^
            detail::mix64(seed.stream_index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
        bool all_zero = true;
        for (auto& s : state_) {
            s = detail::splitmix64(h);
            all_zero = all_zero && s == 0;
        }
        if (all_zero) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal variate (ziggurat with exact tail handling).
    double normal() {
        const auto& t = detail::ziggurat_tables();
        for (;;) {
            const std::int32_t hz = static_cast<std::int32_t>(next_u64());
            const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
            const std::uint32_t ahz =
                static_cast<std::uint32_t>(hz < 0 ? -static_cast<std::int64_t>(hz) : hz);
            if (ahz < t.kn[iz]) return hz * t.wn[iz];
            if (iz == 0) {
                // base strip: exact tail beyond r
                const double r = 3.442619855899;
                double x, y;
                do {
                    x = -std::log(positive_uniform()) / r;
                    y = -std::log(positive_uniform());
                } while (y + y < x * x);
                return hz > 0 ? r + x : -(r + x);
            }
            const double x = hz * t.wn[iz];
            if (t.fn[iz] + uniform01() * (t.fn[iz - 1] - t.fn[iz]) < std::exp(-0.5 * x * x))
                return x;
        }
    }

    /// Fair coin as +/-1.
    int rademacher() {
        if (bit_count_ == 0) {
            bit_cache_ = next_u64();
            bit_count_ = 64;
        }
        const int b = static_cast<int>(bit_cache_ & 1u);
        bit_cache_ >>= 1;
        --bit_count_;
        return 2 * b - 1;
    }

  private:
    double positive_uniform() {
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return u;
    }

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t bit_cache_ = 0;
    int bit_count_ = 0;
};

}  // namespace slepian_lab

#endif
