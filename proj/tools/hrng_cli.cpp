#include "hrng/bigint.hpp"
#include "hrng/chain_verifier.hpp"
#include "hrng/error.hpp"
#include "hrng/gas_model.hpp"
#include "hrng/protocol.hpp"
#include "hrng/stats.hpp"
#include "hrng/system_config.hpp"
#include "hrng/transcript.hpp"
#include "hrng/transcript_verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using hrng::Error;
using hrng::ErrorCode;
using nlohmann::json;

// 0 success, 1 protocol or assertion failure, 2 usage or config error.
int exit_code_for(const Error& e) {
    switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidAdversary:
    case ErrorCode::InvalidArity:
        return 2;
    default:
        return 1;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    out << text;
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoError, "short write to " + path);
    }
}

json report_to_json(const hrng::UniformityReport& r) {
    return json{{"sample_count", r.sample_count}, {"bucket_count", r.bucket_count},
                {"counts", r.counts},             {"chi_square", r.chi_square},
                {"p_value", r.p_value},           {"pass", r.pass}};
}

struct RunOptions {
    std::string config_path;
    std::string out_path = "transcript.jsonl";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> ell;
    std::optional<std::string> mode;
    std::optional<std::string> group;
};

int cmd_run(const RunOptions& opt) {
    json doc;
    try {
        doc = json::parse(read_file(opt.config_path));
    } catch (const json::exception& e) {
        std::cerr << "error: " << opt.config_path << " is not valid JSON: " << e.what() << "\n";
        return 2;
    }
    hrng::SystemConfig config = hrng::config_from_json(doc);
    hrng::AdversarySpec adversary;
    if (doc.contains("adversary")) {
        adversary = hrng::adversary_from_json(doc.at("adversary"));
    }
    if (opt.seed) {
        config.seed = *opt.seed;
    }
    if (opt.ell) {
        config.ell = *opt.ell;
    }
    if (opt.group) {
        config.group_name = *opt.group;
    }
    if (opt.mode) {
        config.aggregation = hrng::verifier_mode_from_string(*opt.mode) == hrng::VerifierMode::Optimized
                                 ? hrng::AggregationMethod::SumModP
                                 : hrng::AggregationMethod::Xor;
    }

    hrng::RoundResult result = hrng::run_round(config, adversary);
    write_file(opt.out_path, result.transcript.to_jsonl());

    std::cout << "round completed: ell=" << config.ell << " mode=" << hrng::to_string(result.gas_report.mode)
              << " entries=" << result.pool_entries << " total_gas=" << result.gas_report.total_gas << "\n";
    if (result.final_result.mode == hrng::VerifierMode::NonOptimized) {
        std::cout << "final value (xor of raw bits): " << result.final_result.value_bits.to_hex() << "\n";
    } else {
        std::cout << "final value (sum mod p): " << hrng::to_dec(result.final_result.value_scalar) << "\n";
    }
    std::cout << "transcript: " << opt.out_path << " (" << result.transcript.size() << " records)\n";
    return 0;
}

int cmd_verify(const std::string& path) {
    hrng::Transcript transcript = hrng::Transcript::from_jsonl(read_file(path));
    hrng::Verdict verdict = hrng::verify_transcript(transcript);
    if (verdict.accepted) {
        std::cout << "transcript verified: " << transcript.size() << " records\n";
        return 0;
    }
    std::cerr << "transcript rejected: " << verdict.reason;
    if (!verdict.detail.empty()) {
        std::cerr << " (" << verdict.detail << ")";
    }
    std::cerr << "\n";
    return 1;
}

int cmd_gas_report(std::uint32_t ell_min, std::uint32_t ell_max, const std::string& csv_path,
                   const std::string& json_path) {
    if (ell_min < 1 || ell_max < ell_min) {
        throw Error(ErrorCode::InvalidArity, "need 1 <= ell-min <= ell-max");
    }
    hrng::GasSchedule schedule;
    std::ostringstream csv;
    csv << "ell,mode,ecadd,ecmul,addmod,total_gas,closed_form_gas\n";
    json rows = json::array();
    bool all_match = true;
    for (std::uint32_t ell = ell_min; ell <= ell_max; ++ell) {
        for (hrng::VerifierMode mode : {hrng::VerifierMode::NonOptimized, hrng::VerifierMode::Optimized}) {
            hrng::OpCounts counts = hrng::measure_verifier_ops(mode, ell);
            std::uint64_t total = hrng::price(counts, schedule);
            std::uint64_t closed = hrng::closed_form(mode, ell);
            all_match = all_match && total == closed;
            csv << ell << ',' << hrng::to_string(mode) << ',' << counts.ecadd << ',' << counts.ecmul << ','
                << counts.addmod << ',' << total << ',' << closed << "\n";
            rows.push_back(json{{"ell", ell},
                                {"mode", hrng::to_string(mode)},
                                {"ecadd", counts.ecadd},
                                {"ecmul", counts.ecmul},
                                {"addmod", counts.addmod},
                                {"total_gas", total},
                                {"closed_form_gas", closed},
                                {"match", total == closed}});
        }
    }
    json comparison = json::array();
    for (const hrng::GasComparisonRow& row : hrng::compare_report(ell_min, ell_max)) {
        comparison.push_back(json{{"ell", row.ell},
                                  {"gas_nonopt", row.gas_nonopt},
                                  {"gas_opt", row.gas_opt},
                                  {"ratio", row.ratio}});
    }
    json summary{{"ell_min", ell_min},     {"ell_max", ell_max}, {"row_count", rows.size()},
                 {"all_match", all_match}, {"rows", rows},       {"mode_comparison", comparison}};
    write_file(csv_path, csv.str());
    write_file(json_path, summary.dump(2) + "\n");
    std::cout << "gas report: " << rows.size() << " rows -> " << csv_path << ", " << json_path << "\n";
    if (!all_match) {
        std::cerr << "error: measured gas diverges from the closed form\n";
        return 1;
    }
    return 0;
}

int cmd_uniformity(const std::string& suite, std::uint64_t seed, std::uint32_t trials,
                   const std::string& json_path, const std::string& csv_path) {
    json report{{"suite", suite}, {"seed", seed}};
    std::ostringstream csv;
    csv << "series,bucket,count\n";
    bool pass = false;

    if (suite == "xor") {
        bool width2 = true;
        for (std::uint64_t a = 0; a < 4; ++a) {
            width2 = width2 && hrng::xor_uniformity_oracle(2, {a});
        }
        bool width8 = true;
        for (std::uint64_t a = 0; a < 256; ++a) {
            width8 = width8 && hrng::xor_uniformity_oracle(8, {a});
        }
        bool multi = hrng::xor_uniformity_oracle(8, {0x5a, 0x13, 0xff});
        pass = width2 && width8 && multi;
        report["cases"] = json{{"width2_all_masks", width2},
                               {"width8_all_masks", width8},
                               {"width8_three_adversaries", multi}};
        std::vector<std::uint64_t> counts(256, 0);
        for (std::uint64_t honest = 0; honest < 256; ++honest) {
            ++counts[honest ^ 0xa5];
        }
        for (std::size_t b = 0; b < counts.size(); ++b) {
            csv << "xor_width8_mask_a5," << b << ',' << counts[b] << "\n";
        }
    } else if (suite == "eq3") {
        bool small = hrng::sum_mod_p_uniformity_oracle(5, 3);
        bool full = true;
        for (std::uint64_t a = 0; a < 251; ++a) {
            full = full && hrng::sum_mod_p_uniformity_oracle(251, a);
        }
        pass = small && full;
        report["cases"] = json{{"p5_shift3", small}, {"p251_all_shifts", full}};
        std::vector<std::uint64_t> counts(251, 0);
        for (std::uint64_t m = 0; m < 251; ++m) {
            ++counts[(m + 17) % 251];
        }
        for (std::size_t b = 0; b < counts.size(); ++b) {
            csv << "sum_mod_251_shift17," << b << ',' << counts[b] << "\n";
        }
    } else if (suite == "irwin-hall") {
        hrng::IrwinHallReport ih = hrng::irwin_hall_negative_check(2, 4, trials, seed);
        pass = !ih.unreduced.pass && ih.reduced.pass;
        report["trials"] = trials;
        report["exact_counts"] = ih.exact_counts;
        report["unreduced"] = report_to_json(ih.unreduced);
        report["reduced"] = report_to_json(ih.reduced);
        for (std::size_t b = 0; b < ih.exact_counts.size(); ++b) {
            csv << "exact," << b << ',' << ih.exact_counts[b] << "\n";
        }
        for (std::size_t b = 0; b < ih.unreduced.counts.size(); ++b) {
            csv << "unreduced," << b << ',' << ih.unreduced.counts[b] << "\n";
        }
        for (std::size_t b = 0; b < ih.reduced.counts.size(); ++b) {
            csv << "reduced," << b << ',' << ih.reduced.counts[b] << "\n";
        }
    } else if (suite == "reduction") {
        const hrng::BigInt p = 251;
        json rows = json::array();
        bool monotone = true;
        double prev = 1.0;
        for (std::size_t bits = 8; bits <= 16; ++bits) {
            hrng::BiasBound bound = hrng::reduction_bias_bound(bits, p);
            monotone = monotone && bound.deviation < prev;
            prev = bound.deviation;
            rows.push_back(json{{"bit_len", bits},
                                {"numerator", hrng::to_dec(bound.numerator)},
                                {"denominator", hrng::to_dec(bound.denominator)},
                                {"deviation", bound.deviation}});
        }
        std::vector<std::uint64_t> hist = hrng::reduction_histogram(8, 251);
        hrng::BigInt worst_num = 0;
        for (std::uint64_t count : hist) {
            hrng::BigInt diff = hrng::BigInt(count) * 251 >= 256 ? hrng::BigInt(count) * 251 - 256
                                                                 : hrng::BigInt(256) - hrng::BigInt(count) * 251;
            if (diff > worst_num) {
                worst_num = diff;
            }
        }
        hrng::BiasBound b8 = hrng::reduction_bias_bound(8, p);
        bool histogram_matches = worst_num == b8.numerator;
        pass = monotone && histogram_matches;
        report["p"] = 251;
        report["bounds"] = rows;
        report["strictly_decreasing"] = monotone;
        report["histogram_matches_bound"] = histogram_matches;
        for (std::size_t b = 0; b < hist.size(); ++b) {
            csv << "mod251_of_8bit," << b << ',' << hist[b] << "\n";
        }
    } else if (suite == "end-to-end") {
        hrng::EndToEndExperiment biased = hrng::biased_sum_experiment(seed);
        hrng::UniformityReport positive = hrng::end_to_end_uniformity(biased.config, biased.adversary, trials, 11);
        hrng::EndToEndExperiment colluder = hrng::all_colluder_experiment(seed);
        hrng::UniformityReport negative = hrng::end_to_end_uniformity(colluder.config, colluder.adversary, trials, 11);
        pass = positive.pass && !negative.pass;
        report["trials"] = trials;
        report["biased_devices"] = json{{"config", hrng::to_json(biased.config)},
                                        {"adversary", hrng::to_json(biased.adversary)},
                                        {"report", report_to_json(positive)}};
        report["all_colluder_control"] = json{{"config", hrng::to_json(colluder.config)},
                                              {"adversary", hrng::to_json(colluder.adversary)},
                                              {"report", report_to_json(negative)}};
        for (std::size_t b = 0; b < positive.counts.size(); ++b) {
            csv << "biased_devices," << b << ',' << positive.counts[b] << "\n";
        }
        for (std::size_t b = 0; b < negative.counts.size(); ++b) {
            csv << "all_colluder_control," << b << ',' << negative.counts[b] << "\n";
        }
    } else {
        std::cerr << "error: unknown suite '" << suite
                  << "' (expected xor, eq3, irwin-hall, reduction, end-to-end)\n";
        return 2;
    }

    report["pass"] = pass;
    write_file(json_path, report.dump(2) + "\n");
    write_file(csv_path, csv.str());
    std::cout << "suite " << suite << ": " << (pass ? "PASS" : "FAIL") << " -> " << json_path << ", "
              << csv_path << "\n";
    return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid randomness beacon simulator"};
    app.require_subcommand(1);

    RunOptions run_opt;
    std::uint64_t seed_flag = 0;
    std::uint32_t ell_flag = 0;
    std::string mode_flag;
    std::string group_flag;
    CLI::App* run = app.add_subcommand("run", "execute one protocol round and write its transcript");
    run->add_option("--config", run_opt.config_path, "JSON config file")->required();
    run->add_option("--out", run_opt.out_path, "transcript output path");
    CLI::Option* seed_opt = run->add_option("--seed", seed_flag, "override the config seed");
    CLI::Option* ell_opt = run->add_option("--ell", ell_flag, "override the number of aggregated entries");
    CLI::Option* mode_opt = run->add_option("--mode", mode_flag, "override the verifier mode")
                                ->check(CLI::IsMember({"non-optimized", "optimized"}));
    CLI::Option* group_opt = run->add_option("--group", group_flag, "override the commitment group")
                                 ->check(CLI::IsMember({"test11", "ristretto255"}));

    std::string transcript_path;
    CLI::App* verify = app.add_subcommand("verify", "check a transcript from scratch");
    verify->add_option("--transcript", transcript_path, "transcript file")->required();

    std::uint32_t ell_min = 1;
    std::uint32_t ell_max = 12;
    std::string gas_csv = "gas_report.csv";
    std::string gas_json = "gas_report.json";
    CLI::App* gas = app.add_subcommand("gas-report", "measure verifier gas against the closed forms");
    gas->add_option("--ell-min", ell_min, "smallest aggregation arity");
    gas->add_option("--ell-max", ell_max, "largest aggregation arity");
    gas->add_option("--csv", gas_csv, "CSV output path");
    gas->add_option("--json", gas_json, "JSON summary output path");

    std::string suite;
    std::uint64_t uni_seed = 1;
    std::uint32_t trials = 10000;
    std::string uni_json = "uniformity_report.json";
    std::string uni_csv = "uniformity_hist.csv";
    CLI::App* uniformity = app.add_subcommand("uniformity", "run a statistical suite");
    uniformity->add_option("--suite", suite, "xor, eq3, irwin-hall, reduction or end-to-end")->required();
    uniformity->add_option("--seed", uni_seed, "suite seed");
    uniformity->add_option("--trials", trials, "sampled trials for the seeded suites");
    uniformity->add_option("--json", uni_json, "JSON report output path");
    uniformity->add_option("--csv", uni_csv, "histogram CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) {
            if (*seed_opt) {
                run_opt.seed = seed_flag;
            }
            if (*ell_opt) {
                run_opt.ell = ell_flag;
            }
            if (*mode_opt) {
                run_opt.mode = mode_flag;
            }
            if (*group_opt) {
                run_opt.group = group_flag;
            }
            return cmd_run(run_opt);
        }
        if (verify->parsed()) {
            return cmd_verify(transcript_path);
        }
        if (gas->parsed()) {
            return cmd_gas_report(ell_min, ell_max, gas_csv, gas_json);
        }
        if (uniformity->parsed()) {
            return cmd_uniformity(suite, uni_seed, trials, uni_json, uni_csv);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
