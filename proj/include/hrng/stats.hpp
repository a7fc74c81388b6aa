#pragma once

#include "hrng/bigint.hpp"
#include "hrng/system_config.hpp"

#include <cstdint>
#include <vector>

namespace hrng {

// Fixed significance level; sampling is always seed-pinned so verdicts are
// reproducible in CI.
inline constexpr double kAlpha = 0.01;

struct UniformityReport {
    std::uint64_t sample_count = 0;
    std::uint32_t bucket_count = 0;
    std::vector<std::uint64_t> counts;
    double chi_square = 0.0;
    double p_value = 0.0;
    bool pass = false; // p_value >= kAlpha
};

// Pearson chi-square of the counts against the uniform distribution.
UniformityReport chi_square_uniform(const std::vector<std::uint64_t>& counts);

// XOR with any fixed adversary combination permutes the honest input space:
// enumerates every honest value at the given width and confirms each output
// occurs exactly once. Width capped at 16 bits.
bool xor_uniformity_oracle(std::uint32_t bit_width, const std::vector<std::uint64_t>& adversary_values);

// m -> (m + a) mod p is a bijection: every residue hit exactly once. p capped
// at 10^4 for enumeration.
bool sum_mod_p_uniformity_oracle(std::uint32_t p, std::uint64_t adversary_sum);

struct IrwinHallReport {
    std::vector<std::uint64_t> exact_counts; // enumerated sum distribution over all tuples
    UniformityReport unreduced;              // seeded sample of raw sums
    UniformityReport reduced;                // the same sums mod range_size
};

// Sums of ell uniform values over [0, range_size) pile up in the middle, so
// the raw sum fails uniformity while the mod-range_size reduction passes.
IrwinHallReport irwin_hall_negative_check(std::uint32_t ell, std::uint32_t range_size,
                                          std::uint64_t samples = 10000, std::uint64_t seed = 7);

struct BiasBound {
    double deviation = 0.0;
    // deviation as an exact fraction
    BigInt numerator;
    BigInt denominator;
};

// Largest deviation of (b-bit uniform value mod p) from 1/p per residue,
// exact. Non-increasing in bit_len for fixed p.
BiasBound reduction_bias_bound(std::size_t bit_len, const BigInt& p);

// Per-residue histogram of (b-bit value mod p) by literal enumeration;
// bit_len capped at 24.
std::vector<std::uint64_t> reduction_histogram(std::size_t bit_len, std::uint32_t p);

// Runs `trials` full rounds with per-trial sub-seeds and buckets the final
// values mod bucket_count.
UniformityReport end_to_end_uniformity(const SystemConfig& config, const AdversarySpec& adversary,
                                       std::uint32_t trials, std::uint32_t bucket_count);

struct EndToEndExperiment {
    SystemConfig config;
    AdversarySpec adversary;
};

// Strongest active-device setup on the small group: pinned devices supply all
// but one of the aggregated inputs, one honest input remains. Sum aggregation
// should still come out uniform.
EndToEndExperiment biased_sum_experiment(std::uint64_t seed);

// Negative control: a sabotaged deployment (diversity check disabled) where a
// colluding dApp selects only pinned entries behind one gateway. The sum is
// constant, so the uniformity test must fail.
EndToEndExperiment all_colluder_experiment(std::uint64_t seed);

} // namespace hrng
