#pragma once

#include <cstdint>
#include <random>

namespace rlncoff {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Independent substream seed for (seed, stream, index). Used to give every
// Monte Carlo trial its own deterministic generator, so results do not
// depend on how trials are scheduled.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    std::uint64_t z = mix64(seed + 0x9E3779B97F4A7C15ull);
    z = mix64(z ^ (stream + 0xBF58476D1CE4E5B9ull));
    return mix64(z ^ (index + 0x94D049BB133111EBull));
}

// Seeded random source with a portable draw order. Field elements come from
// buffered engine output (bytes for F_256, single bits for F_2, low bits
// first), Bernoulli draws from a fresh 53-bit uniform each; none of it goes
// through distribution objects whose output the standard leaves unspecified.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double next_unit() {  // [0, 1)
        return double(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_unit() < p; }

    std::uint8_t element(unsigned field_order) {
        if (field_order == 2) {
            if (bit_count_ == 0) {
                bit_buf_ = engine_();
                bit_count_ = 64;
            }
            const std::uint8_t v = bit_buf_ & 1u;
            bit_buf_ >>= 1;
            --bit_count_;
            return v;
        }
        if (byte_count_ == 0) {
            byte_buf_ = engine_();
            byte_count_ = 8;
        }
        const std::uint8_t v = byte_buf_ & 0xFFu;
        byte_buf_ >>= 8;
        --byte_count_;
        return v;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t bit_buf_ = 0;
    std::uint64_t byte_buf_ = 0;
    int bit_count_ = 0;
    int byte_count_ = 0;
};

}  // namespace rlncoff
