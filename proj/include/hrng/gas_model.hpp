#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hrng {

// NonOptimized opens every commitment and XOR-aggregates; Optimized combines
// the commitments homomorphically, opens once, and sum-aggregates.
enum class VerifierMode {
    NonOptimized,
    Optimized,
};

const char* to_string(VerifierMode m);
VerifierMode verifier_mode_from_string(const std::string& s);

// EVM prices per operation, in gas units. Overridable for sensitivity runs.
struct GasSchedule {
    std::uint64_t addmod_cost = 8;
    std::uint64_t mulmod_cost = 8;
    std::uint64_t ecadd_cost = 150;
    std::uint64_t ecmul_cost = 6000;

    bool operator==(const GasSchedule&) const = default;
};

struct OpCounts {
    std::uint64_t ecadd = 0;
    std::uint64_t ecmul = 0;
    std::uint64_t addmod = 0;
    std::uint64_t mulmod = 0;

    bool operator==(const OpCounts&) const = default;
};

struct GasReport {
    VerifierMode mode = VerifierMode::NonOptimized;
    std::uint32_t ell = 0;
    OpCounts counts;
    std::uint64_t total_gas = 0;
    std::uint64_t closed_form_gas = 0;

    bool operator==(const GasReport&) const = default;
};

std::uint64_t price(const OpCounts& counts, const GasSchedule& schedule);

// NonOptimized: 12158*ell - 8.  Optimized: 166*ell + 11984.
std::uint64_t closed_form(VerifierMode mode, std::uint32_t ell);

struct GasComparisonRow {
    std::uint32_t ell = 0;
    std::uint64_t gas_nonopt = 0;
    std::uint64_t gas_opt = 0;
    double ratio = 0.0; // gas_opt / gas_nonopt
};

std::vector<GasComparisonRow> compare_report(std::uint32_t ell_from, std::uint32_t ell_to);

} // namespace hrng
