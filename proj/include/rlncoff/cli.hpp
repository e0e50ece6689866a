// Command implementations behind the rlnc-offload executable, kept as
// ordinary functions over streams so tests can drive them directly:
// sweep (grid -> CSV), validate (analytic-vs-simulation checks) and
// offload-demo (file through the full codec + corridor pipeline).
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rlncoff/analytic.hpp"
#include "rlncoff/codec.hpp"
#include "rlncoff/config.hpp"
#include "rlncoff/rng.hpp"
#include "rlncoff/sim.hpp"
#include "rlncoff/sweep.hpp"

namespace rlncoff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFail = 1;
inline constexpr int kExitUsage = 2;

struct Overrides {
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
};

namespace detail {

inline constexpr std::uint64_t kValidateStream = 0x76616c2d666bull;
inline constexpr std::uint64_t kDemoStream = 0x64656d6f2d31ull;

inline sim::ScenarioConfig load_with_overrides(const std::string& config_path,
                                               const Overrides& overrides,
                                               config::ParsedConfig* parsed_out = nullptr) {
    config::ParsedConfig parsed = config::read_config(config_path);
    sim::ScenarioConfig cfg = config::load_scenario(parsed);
    if (overrides.trials) cfg.trials = *overrides.trials;
    if (overrides.seed) cfg.seed = *overrides.seed;
    try {
        cfg.validate();
    } catch (const std::domain_error& e) {
        throw config::ConfigError(parsed.path.string() + ": " + e.what());
    }
    if (parsed_out) *parsed_out = std::move(parsed);
    return cfg;
}

inline std::string fmt(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(6) << v;
    return out.str();
}

}  // namespace detail

inline int cmd_sweep(const std::string& config_path, const std::string& out_path,
                     const Overrides& overrides, std::ostream& report, std::ostream& err) {
    try {
        config::ParsedConfig parsed;
        const sim::ScenarioConfig cfg =
            detail::load_with_overrides(config_path, overrides, &parsed);
        const sweep::Grid grid = config::load_grid(parsed, cfg);
        const std::vector<sweep::Row> rows = sweep::run(cfg, grid);
        // Binary mode keeps the byte-identical reproducibility contract out
        // of the hands of platform newline translation.
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            err << "error: cannot open output file '" << out_path << "' for writing\n";
            return kExitUsage;
        }
        sweep::write_csv(out, rows);
        out.flush();
        if (!out) {
            err << "error: failed while writing '" << out_path << "'\n";
            return kExitUsage;
        }
        report << "wrote " << rows.size() << " rows to " << out_path << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

// Test seams for validate: checks call these instead of the real functions
// so the failure paths can be exercised deliberately.
struct ValidateHooks {
    std::function<double(std::size_t, std::size_t, unsigned)> full_rank =
        [](std::size_t received, std::size_t generation, unsigned order) {
            return analytic::p_full_rank(received, generation, order);
        };
};

inline int cmd_validate(const std::string& config_path, const Overrides& overrides,
                        std::ostream& report, std::ostream& err,
                        const ValidateHooks& hooks = {}) {
    try {
        const sim::ScenarioConfig cfg = detail::load_with_overrides(config_path, overrides);
        const gf::Field field(cfg.field_order);
        const std::size_t K = cfg.generation_size;
        bool all_ok = true;
        const auto check = [&](const std::string& name, bool ok, const std::string& detail) {
            report << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
            all_ok = all_ok && ok;
        };

        // Decoder rank frequencies against the closed-form full-rank law.
        {
            constexpr std::size_t kSets = 20000;
            bool ok = true;
            std::ostringstream detail;
            for (const std::size_t received : {K, K + 2}) {
                codec::Decoder decoder(field, 1, K, 0);
                codec::CodedPacket pkt;
                pkt.message_index = 1;
                pkt.coeffs.assign(K, 0);
                std::size_t full = 0;
                Rng rng(derive_seed(cfg.seed, detail::kValidateStream, received));
                for (std::size_t s = 0; s < kSets; ++s) {
                    decoder.reset();
                    for (std::size_t n = 0; n < received && !decoder.decodable(); ++n) {
                        for (auto& c : pkt.coeffs) c = rng.element(field.order());
                        decoder.ingest(pkt);
                    }
                    if (decoder.decodable()) ++full;
                }
                const double expected = hooks.full_rank(received, K, cfg.field_order);
                const double observed = double(full) / double(kSets);
                const double sigma =
                    std::sqrt(std::max(expected * (1.0 - expected), 0.0) / double(kSets));
                const bool tuple_ok = std::abs(observed - expected) <= 4.0 * sigma + 1e-3;
                ok = ok && tuple_ok;
                detail << "n=" << received << " observed " << detail::fmt(observed)
                       << " expected " << detail::fmt(expected) << "; ";
            }
            check("full-rank agreement", ok, detail.str());
        }

        // Reception-count distributions must be proper distributions.
        {
            const sim::TransmissionPlan plan = sim::build_schedule(cfg);
            double worst = 0.0;
            for (std::size_t m = 1; m <= cfg.interleaved_messages; ++m) {
                for (const auto receiver : {sim::Receiver::Fog, sim::Receiver::Eavesdropper}) {
                    const auto profile = sim::success_probabilities(plan, cfg, receiver,
                                                                    std::uint32_t(m));
                    const auto pmf = analytic::reception_pmf(profile);
                    double sum = 0.0;
                    for (double p : pmf) sum += p;
                    worst = std::max(worst, std::abs(sum - 1.0));
                }
            }
            check("reception-pmf normalization", worst <= 1e-12,
                  "max |sum - 1| = " + std::to_string(worst));
        }

        // Monte Carlo against the analytic metrics on this very scenario.
        const sim::AnalyticMetrics an = sim::analytic_metrics(cfg);
        const sim::MonteCarloResult mc = sim::run_monte_carlo(cfg);
        {
            const auto agree = [&](double analytic_value, const sim::Estimate& est) {
                const double ci_analytic =
                    1.959963984540054 *
                    std::sqrt(std::max(analytic_value * (1.0 - analytic_value), 0.0) /
                              double(est.trials));
                const double tol = 3.0 * std::max(est.ci_halfwidth, ci_analytic) + 1e-9;
                return std::abs(est.value - analytic_value) <= tol;
            };
            check("analytic-mc agreement (D)", agree(an.recovery, mc.recovery),
                  "analytic " + detail::fmt(an.recovery) + ", mc " +
                      detail::fmt(mc.recovery.value) + " +/- " +
                      detail::fmt(mc.recovery.ci_halfwidth));
            check("analytic-mc agreement (I)", agree(an.intercept, mc.intercept),
                  "analytic " + detail::fmt(an.intercept) + ", mc " +
                      detail::fmt(mc.intercept.value) + " +/- " +
                      detail::fmt(mc.intercept.ci_halfwidth));
        }

        // More transmissions can only help either receiver.
        {
            bool ok = true;
            double prev_d = -1.0, prev_i = -1.0;
            for (std::size_t overhead = 0; overhead <= 10; ++overhead) {
                sim::ScenarioConfig point = cfg;
                point.transmissions_per_message = K + overhead;
                const sim::AnalyticMetrics metrics = sim::analytic_metrics(point);
                ok = ok && metrics.recovery >= prev_d - 1e-12 &&
                     metrics.intercept >= prev_i - 1e-12;
                prev_d = metrics.recovery;
                prev_i = metrics.intercept;
            }
            check("overhead monotonicity", ok,
                  "D and I non-decreasing over N-K in 0..10");
        }

        // Same seed, same estimates, bit for bit.
        {
            const sim::MonteCarloResult again = sim::run_monte_carlo(cfg);
            const bool ok = again.recovery.value == mc.recovery.value &&
                            again.intercept.value == mc.intercept.value &&
                            again.recovery.ci_halfwidth == mc.recovery.ci_halfwidth &&
                            again.intercept.ci_halfwidth == mc.intercept.ci_halfwidth;
            check("determinism", ok, "two runs at seed " + std::to_string(cfg.seed));
        }

        report << (all_ok ? "validate: all checks passed\n"
                          : "validate: at least one check failed\n");
        return all_ok ? kExitOk : kExitCheckFail;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

namespace detail {

inline std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes) {
    std::vector<std::uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t b : bytes)
        for (int i = 7; i >= 0; --i) bits.push_back(std::uint8_t((b >> i) & 1u));
    return bits;
}

inline std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits) {
    std::vector<std::uint8_t> bytes(bits.size() / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= std::uint8_t(0x80u >> (i % 8));
    return bytes;
}

}  // namespace detail

// Pushes a file through the whole pipeline: segment into messages, replay
// the corridor schedule batch by batch (d messages per reset window, wrapping
// around the stretch for long files), decode at the fog and the
// eavesdropper, then compare the fog's reassembled bytes with the input.
inline int cmd_offload_demo(const std::string& input_path, const std::string& config_path,
                            const Overrides& overrides, std::ostream& report,
                            std::ostream& err) {
    try {
        const sim::ScenarioConfig cfg = detail::load_with_overrides(config_path, overrides);
        std::ifstream in(input_path, std::ios::binary);
        if (!in) {
            err << "error: cannot open input file '" << input_path << "'\n";
            return kExitUsage;
        }
        std::vector<std::uint8_t> input((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
        if (in.bad()) {
            err << "error: failed while reading '" << input_path << "'\n";
            return kExitUsage;
        }
        if (input.empty()) {
            report << "input '" << input_path << "' is empty: 0 messages, nothing to offload\n";
            return kExitOk;
        }

        const gf::Field field(cfg.field_order);
        // Over GF(2) the payload symbols are bits, so the file is offloaded
        // bit by bit; over GF(256) each byte is one symbol.
        const std::vector<std::uint8_t> symbols =
            cfg.field_order == 2 ? detail::unpack_bits(input) : input;
        const codec::SegmentedStream stream = codec::segment_stream(
            field, symbols, cfg.generation_size, cfg.packet_len);
        const std::size_t message_count = stream.messages.size();
        const std::size_t d = cfg.interleaved_messages;

        const sim::TransmissionPlan plan = sim::build_schedule(cfg);
        std::vector<sim::EpochLinks> links;
        for (std::size_t e = 0; e < plan.epoch_count; ++e)
            links.push_back(sim::epoch_links(plan, cfg, e));

        Rng rng(derive_seed(cfg.seed, detail::kDemoStream, 0));
        std::vector<codec::SourceMessage> recovered(message_count);
        std::size_t fog_total = 0, eaves_total = 0;
        for (std::size_t batch = 0; batch * d < message_count; ++batch) {
            const sim::EpochLinks& epoch = links[batch % plan.epoch_count];
            const std::size_t first = batch * d;
            const std::size_t live = std::min(d, message_count - first);
            std::vector<codec::Decoder> fog, eaves;
            for (std::size_t s = 0; s < live; ++s) {
                fog.emplace_back(field, std::uint32_t(first + s + 1), cfg.generation_size,
                                 cfg.packet_len);
                eaves.emplace_back(field, std::uint32_t(first + s + 1), cfg.generation_size,
                                   cfg.packet_len);
            }
            const std::size_t tx_count = epoch.message.size();
            for (std::size_t t = 0; t < tx_count; ++t) {
                const std::uint32_t slot = epoch.message[t];
                if (slot >= live) continue;  // partial tail batch
                unsigned rsu_hits = 0;
                for (std::uint32_t l = epoch.rsu_begin[t]; l < epoch.rsu_begin[t + 1]; ++l)
                    if (rng.bernoulli(epoch.rsu_prob[l])) ++rsu_hits;
                const bool eaves_hit =
                    epoch.eaves_prob[t] > 0.0 && rng.bernoulli(epoch.eaves_prob[t]);
                const bool fog_wants = rsu_hits > 0 && !fog[slot].decodable();
                const bool eaves_wants = eaves_hit && !eaves[slot].decodable();
                if (!fog_wants && !eaves_wants) continue;
                const codec::CodedPacket pkt =
                    codec::encode_packet(field, stream.messages[first + slot], rng);
                // Round-trip the wire format on the way in, as a receiver would.
                const codec::CodedPacket received =
                    codec::parse_packet(codec::serialize_packet(pkt));
                if (fog_wants)
                    for (unsigned h = 0; h < rsu_hits; ++h) fog[slot].ingest(received);
                if (eaves_wants) eaves[slot].ingest(received);
            }
            for (std::size_t s = 0; s < live; ++s) {
                const std::size_t m = first + s;
                const bool fog_ok = fog[s].decodable();
                const bool eaves_ok = eaves[s].decodable();
                fog_total += fog_ok ? 1 : 0;
                eaves_total += eaves_ok ? 1 : 0;
                if (fog_ok) {
                    recovered[m].index = std::uint32_t(m + 1);
                    recovered[m].packet_len = cfg.packet_len;
                    recovered[m].packets = fog[s].extract();
                }
                report << "message " << (m + 1) << ": fog "
                       << (fog_ok ? "decoded" : "undecoded") << ", eavesdropper "
                       << (eaves_ok ? "decoded" : "blocked") << "\n";
            }
        }

        report << "offload: " << fog_total << "/" << message_count
               << " messages recovered by the fog, " << eaves_total
               << " intercepted by the eavesdropper\n";
        if (fog_total != message_count) {
            report << "round-trip: skipped (" << (message_count - fog_total)
                   << " messages undecoded)\n";
            return kExitCheckFail;
        }
        std::vector<std::uint8_t> out_symbols =
            codec::reassemble_stream(recovered, stream.original_len);
        const std::vector<std::uint8_t> output =
            cfg.field_order == 2 ? detail::pack_bits(out_symbols) : std::move(out_symbols);
        if (output != input) {
            report << "round-trip: MISMATCH between reassembled bytes and input\n";
            return kExitCheckFail;
        }
        report << "round-trip: reassembled output matches the input ("
               << input.size() << " bytes)\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace rlncoff::cli
