// Closed-form recovery and intercept probabilities: a Poisson-binomial
// reception count composed with the full-rank probability of a uniformly
// random coefficient matrix.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlncoff::analytic {

inline void check_field_order(unsigned q) {
    if (q != 2 && q != 256)
        throw std::domain_error("field order must be 2 or 256, got " + std::to_string(q));
}

// Probability that `received` uniformly random coefficient vectors of length
// generation_size over F_q contain generation_size independent ones:
//   prod_{j=0}^{K-1} (1 - q^(j-n)),  zero when n < K.
// Strictly increasing in n (for n >= K) and in q.
inline double p_full_rank(std::size_t received, std::size_t generation_size,
                          unsigned field_order) {
    check_field_order(field_order);
    if (generation_size < 1)
        throw std::domain_error("generation size must be at least 1");
    if (received < generation_size) return 0.0;
    const int bits_per_symbol = field_order == 2 ? 1 : 8;
    double p = 1.0;
    for (std::size_t j = 0; j < generation_size; ++j) {
        const double gap = double(received - j) * bits_per_symbol;
        // q^(j-n) as an exact power of two; underflows harmlessly to 0.
        p *= 1.0 - (gap > 1100.0 ? 0.0 : std::ldexp(1.0, -int(gap)));
    }
    return p;
}

// Distribution of the number of successful receptions among independent
// transmissions with success probabilities `success_probs` (Poisson
// binomial), via the standard O(N^2) dynamic program. pmf[n] is the
// probability of exactly n successes, n = 0..N.
inline std::vector<double> reception_pmf(std::span<const double> success_probs) {
    for (double p : success_probs)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::domain_error("success probabilities must lie in [0,1]");
    std::vector<double> pmf{1.0};
    pmf.reserve(success_probs.size() + 1);
    for (double p : success_probs) {
        pmf.push_back(0.0);
        for (std::size_t k = pmf.size() - 1; k > 0; --k)
            pmf[k] = pmf[k] * (1.0 - p) + pmf[k - 1] * p;
        pmf[0] *= 1.0 - p;
    }
    return pmf;
}

inline double decode_probability(std::span<const double> success_profile,
                                 std::size_t generation_size, unsigned field_order) {
    const std::vector<double> pmf = reception_pmf(success_profile);
    double total = 0.0;
    for (std::size_t n = 0; n < pmf.size(); ++n)
        total += pmf[n] * p_full_rank(n, generation_size, field_order);
    return total;
}

// Probability that the fog recovers a source message whose transmissions
// are received with the given per-transmission probabilities.
inline double recovery_probability(std::span<const double> success_profile,
                                   std::size_t generation_size, unsigned field_order) {
    return decode_probability(success_profile, generation_size, field_order);
}

// Same mathematics applied to the eavesdropper's reception profile.
inline double intercept_probability(std::span<const double> eaves_profile,
                                    std::size_t generation_size, unsigned field_order) {
    return decode_probability(eaves_profile, generation_size, field_order);
}

}  // namespace rlncoff::analytic
