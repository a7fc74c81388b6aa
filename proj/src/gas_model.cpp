#include "hrng/gas_model.hpp"

#include "hrng/error.hpp"

namespace hrng {

const char* to_string(VerifierMode m) {
    return m == VerifierMode::NonOptimized ? "non-optimized" : "optimized";
}

VerifierMode verifier_mode_from_string(const std::string& s) {
    if (s == "non-optimized") {
        return VerifierMode::NonOptimized;
    }
    if (s == "optimized") {
        return VerifierMode::Optimized;
    }
    throw Error(ErrorCode::ParseError, "unknown verifier mode: " + s);
}

std::uint64_t price(const OpCounts& counts, const GasSchedule& schedule) {
    return counts.ecadd * schedule.ecadd_cost + counts.ecmul * schedule.ecmul_cost +
           counts.addmod * schedule.addmod_cost + counts.mulmod * schedule.mulmod_cost;
}

std::uint64_t closed_form(VerifierMode mode, std::uint32_t ell) {
    if (ell < 1) {
        throw Error(ErrorCode::InvalidArity, "aggregation needs at least one entry");
    }
    if (mode == VerifierMode::NonOptimized) {
        return 12158ULL * ell - 8;
    }
    return 166ULL * ell + 11984;
}

std::vector<GasComparisonRow> compare_report(std::uint32_t ell_from, std::uint32_t ell_to) {
    if (ell_from < 1 || ell_to < ell_from) {
        throw Error(ErrorCode::InvalidArity, "bad arity range");
    }
    std::vector<GasComparisonRow> rows;
    rows.reserve(ell_to - ell_from + 1);
    for (std::uint32_t ell = ell_from; ell <= ell_to; ++ell) {
        GasComparisonRow row;
        row.ell = ell;
        row.gas_nonopt = closed_form(VerifierMode::NonOptimized, ell);
        row.gas_opt = closed_form(VerifierMode::Optimized, ell);
        row.ratio = static_cast<double>(row.gas_opt) / static_cast<double>(row.gas_nonopt);
        rows.push_back(row);
    }
    return rows;
}

} // namespace hrng
