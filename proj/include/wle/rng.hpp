#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace wle {

// Philox4x32-10 counter-based generator (Salmon et al., Random123)
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key)
    {
        ctr = round(ctr, key);
        for (int i = 1; i < 10; ++i) {
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
            ctr = round(ctr, key);
        }
        return ctr;
    }

private:
    static Counter round(const Counter& c, const Key& k)
    {
        const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
        const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// stream id from a tuple such as (restart index) or (epsilon index, replication)
inline std::uint64_t stream_id(std::initializer_list<std::uint64_t> parts)
{
    std::uint64_t h = 0x6A09E667F3BCC908ull;
    for (auto p : parts)
        h = splitmix64(h ^ splitmix64(p));
    return h;
}

// Key = seed, counter = (block, stream). Independent streams never overlap.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream)
    {
    }

    std::uint64_t next_u64()
    {
        if (pos_ == 2) {
            const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_),
                static_cast<std::uint32_t>(block_ >> 32), static_cast<std::uint32_t>(stream_),
                static_cast<std::uint32_t>(stream_ >> 32)};
            buf_ = Philox4x32::generate(ctr, key_);
            ++block_;
            pos_ = 0;
        }
        const std::uint64_t v = (std::uint64_t{buf_[2 * pos_]} << 32) | buf_[2 * pos_ + 1];
        ++pos_;
        return v;
    }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // (0, 1)
    double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t index(std::uint64_t n)
    {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    double normal()
    {
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buf_{};
    int pos_ = 2;
};

} // namespace wle
