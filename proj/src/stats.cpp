#include "hrng/stats.hpp"

#include "hrng/error.hpp"
#include "hrng/protocol.hpp"
#include "hrng/rng.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <string>
#include <vector>

namespace hrng {

UniformityReport chi_square_uniform(const std::vector<std::uint64_t>& counts) {
    if (counts.size() < 2) {
        throw Error(ErrorCode::InvalidArity, "chi-square needs at least two buckets");
    }
    UniformityReport report;
    report.bucket_count = static_cast<std::uint32_t>(counts.size());
    report.counts = counts;
    for (std::uint64_t c : counts) {
        report.sample_count += c;
    }
    if (report.sample_count == 0) {
        throw Error(ErrorCode::InvalidArity, "chi-square needs samples");
    }
    const double expected = static_cast<double>(report.sample_count) / static_cast<double>(counts.size());
    double chi = 0.0;
    for (std::uint64_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        chi += d * d / expected;
    }
    report.chi_square = chi;
    boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
    report.p_value = chi <= 0.0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, chi));
    report.pass = report.p_value >= kAlpha;
    return report;
}

bool xor_uniformity_oracle(std::uint32_t bit_width, const std::vector<std::uint64_t>& adversary_values) {
    if (bit_width < 1 || bit_width > 16) {
        throw Error(ErrorCode::InvalidArity, "enumeration width must be 1..16 bits");
    }
    const std::uint64_t space = 1ULL << bit_width;
    std::uint64_t a = 0;
    for (std::uint64_t v : adversary_values) {
        if (v >= space) {
            throw Error(ErrorCode::InvalidArity, "adversary value wider than the enumeration width");
        }
        a ^= v;
    }
    std::vector<bool> seen(space, false);
    for (std::uint64_t honest = 0; honest < space; ++honest) {
        const std::uint64_t out = honest ^ a;
        if (seen[out]) {
            return false;
        }
        seen[out] = true;
    }
    for (bool s : seen) {
        if (!s) {
            return false;
        }
    }
    return true;
}

bool sum_mod_p_uniformity_oracle(std::uint32_t p, std::uint64_t adversary_sum) {
    if (p < 2 || p > 10000) {
        throw Error(ErrorCode::InvalidArity, "modulus must be 2..10000 for enumeration");
    }
    std::vector<bool> seen(p, false);
    for (std::uint32_t m = 0; m < p; ++m) {
        const std::uint64_t out = (m + adversary_sum) % p;
        if (seen[out]) {
            return false;
        }
        seen[out] = true;
    }
    for (bool s : seen) {
        if (!s) {
            return false;
        }
    }
    return true;
}

IrwinHallReport irwin_hall_negative_check(std::uint32_t ell, std::uint32_t range_size, std::uint64_t samples,
                                          std::uint64_t seed) {
    if (ell < 2) {
        throw Error(ErrorCode::InvalidArity, "a sum needs at least two addends");
    }
    if (range_size < 2) {
        throw Error(ErrorCode::InvalidArity, "range must have at least two values");
    }
    double tuples = 1.0;
    for (std::uint32_t i = 0; i < ell; ++i) {
        tuples *= range_size;
        if (tuples > (1 << 24)) {
            throw Error(ErrorCode::InvalidArity, "tuple space too large to enumerate");
        }
    }

    IrwinHallReport report;
    const std::size_t sum_buckets = static_cast<std::size_t>(ell) * (range_size - 1) + 1;
    report.exact_counts.assign(sum_buckets, 0);
    // odometer over all range_size^ell tuples
    std::vector<std::uint32_t> tuple(ell, 0);
    for (;;) {
        std::uint64_t sum = 0;
        for (std::uint32_t v : tuple) {
            sum += v;
        }
        ++report.exact_counts[sum];
        std::size_t pos = 0;
        while (pos < ell && ++tuple[pos] == range_size) {
            tuple[pos] = 0;
            ++pos;
        }
        if (pos == ell) {
            break;
        }
    }

    std::vector<std::uint64_t> raw(sum_buckets, 0);
    std::vector<std::uint64_t> reduced(range_size, 0);
    Rng rng = Rng(seed).stream("irwin-hall");
    for (std::uint64_t i = 0; i < samples; ++i) {
        std::uint64_t sum = 0;
        for (std::uint32_t j = 0; j < ell; ++j) {
            sum += rng.below_u64(range_size);
        }
        ++raw[sum];
        ++reduced[sum % range_size];
    }
    report.unreduced = chi_square_uniform(raw);
    report.reduced = chi_square_uniform(reduced);
    return report;
}

BiasBound reduction_bias_bound(std::size_t bit_len, const BigInt& p) {
    if (bit_len < 1 || p < 2) {
        throw Error(ErrorCode::InvalidArity, "need at least one bit and a modulus of 2 or more");
    }
    BigInt total = BigInt(1) << bit_len;
    BigInt r = total % p;
    BiasBound bound;
    if (r == 0) {
        bound.numerator = 0;
        bound.denominator = 1;
        bound.deviation = 0.0;
        return bound;
    }
    // residues below r occur once more than the rest; deviations from 1/p are
    // (p - r)/(p*total) above and r/(p*total) below
    bound.numerator = (p - r) > r ? p - r : r;
    bound.denominator = p * total;
    bound.deviation = bound.numerator.convert_to<double>() / bound.denominator.convert_to<double>();
    return bound;
}

std::vector<std::uint64_t> reduction_histogram(std::size_t bit_len, std::uint32_t p) {
    if (bit_len < 1 || bit_len > 24) {
        throw Error(ErrorCode::InvalidArity, "enumeration length must be 1..24 bits");
    }
    if (p < 2) {
        throw Error(ErrorCode::InvalidArity, "modulus must be at least 2");
    }
    std::vector<std::uint64_t> counts(p, 0);
    const std::uint64_t total = 1ULL << bit_len;
    for (std::uint64_t v = 0; v < total; ++v) {
        ++counts[v % p];
    }
    return counts;
}

UniformityReport end_to_end_uniformity(const SystemConfig& config, const AdversarySpec& adversary,
                                       std::uint32_t trials, std::uint32_t bucket_count) {
    if (trials == 0 || bucket_count < 2) {
        throw Error(ErrorCode::InvalidArity, "need trials and at least two buckets");
    }
    std::vector<std::uint64_t> counts(bucket_count, 0);
    for (std::uint32_t i = 0; i < trials; ++i) {
        SystemConfig trial_config = config;
        trial_config.seed = derive_seed(config.seed, "trial/" + std::to_string(i));
        RoundResult round = run_round(trial_config, adversary);
        BigInt value = round.final_result.mode == VerifierMode::Optimized
                           ? round.final_result.value_scalar
                           : round.final_result.value_bits.to_bigint();
        BigInt bucket = mod_reduce(value, BigInt(bucket_count));
        ++counts[bucket.convert_to<std::uint32_t>()];
    }
    return chi_square_uniform(counts);
}

EndToEndExperiment biased_sum_experiment(std::uint64_t seed) {
    EndToEndExperiment exp;
    exp.config.group_name = "test11";
    exp.config.n_g = 4;
    exp.config.n_i = 2;
    exp.config.n_r = 1;
    exp.config.n_mg = 1;
    exp.config.n_mi = 1;
    exp.config.t = 2;
    exp.config.k = 4;
    exp.config.ell = 3;
    exp.config.entropy_bits = 68;
    exp.config.aggregation = AggregationMethod::SumModP;
    exp.config.seed = seed;
    // Round-robin selection takes the first entry of gateways 1..3, so two of
    // the three aggregated inputs are pinned and one stays honest.
    exp.adversary.compromised_devices = {{1, 1}, {2, 1}};
    exp.adversary.device_strategy = DeviceStrategy::BiasedOutput;
    exp.adversary.target_value = 7;
    return exp;
}

EndToEndExperiment all_colluder_experiment(std::uint64_t seed) {
    EndToEndExperiment exp;
    exp.config.group_name = "test11";
    exp.config.n_g = 3;
    exp.config.n_i = 3;
    exp.config.n_r = 1;
    exp.config.n_mg = 1;
    exp.config.n_mi = 2;
    exp.config.t = 2;
    exp.config.k = 3;
    exp.config.ell = 2;
    exp.config.entropy_bits = 68;
    exp.config.aggregation = AggregationMethod::SumModP;
    exp.config.seed = seed;
    exp.adversary.compromised_devices = {{1, 1}, {1, 2}};
    exp.adversary.compromised_gateways = {1};
    exp.adversary.device_strategy = DeviceStrategy::BiasedOutput;
    exp.adversary.dapp_strategy = DappStrategy::ColluderOnlySelection;
    exp.adversary.target_value = 7;
    exp.adversary.disable_diversity_check = true;
    return exp;
}

} // namespace hrng
