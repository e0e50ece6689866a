// Road-corridor transmission model: RSU row geometry, the spread/interleave
// broadcast schedule, a distance-based erasure channel, and the Monte Carlo
// trial engine that cross-checks the closed-form probabilities.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rlncoff/analytic.hpp"
#include "rlncoff/codec.hpp"
#include "rlncoff/gf.hpp"
#include "rlncoff/parallel.hpp"
#include "rlncoff/rng.hpp"

namespace rlncoff::sim {

// Packet error probability as a function of transmitter-receiver distance.
// Disk: a flat PEP inside the reception radius, certain loss outside.
// Table: piecewise-linear interpolation over (distance, pep) samples,
// certain loss beyond the last sample; stands in for measured coverage data.
struct ChannelModel {
    enum class Kind { Disk, Table };

    Kind kind = Kind::Disk;
    double eps = 0.01;
    double radius_m = 600.0;
    std::vector<std::pair<double, double>> table;  // (distance_m, pep)

    static ChannelModel disk(double eps, double radius_m) {
        ChannelModel ch;
        ch.kind = Kind::Disk;
        ch.eps = eps;
        ch.radius_m = radius_m;
        return ch;
    }

    static ChannelModel from_table(std::vector<std::pair<double, double>> samples) {
        ChannelModel ch;
        ch.kind = Kind::Table;
        ch.table = std::move(samples);
        return ch;
    }

    void validate() const {
        if (kind == Kind::Disk) {
            if (!(eps >= 0.0 && eps <= 1.0))
                throw std::domain_error("channel eps must lie in [0,1]");
            if (!(radius_m >= 0.0))
                throw std::domain_error("channel radius must be non-negative");
            return;
        }
        if (table.empty())
            throw std::domain_error("table channel needs at least one sample");
        double prev = -1.0;
        for (const auto& [dist, pep] : table) {
            if (!(dist >= 0.0) || dist <= prev)
                throw std::domain_error("table distances must be non-negative "
                                        "and strictly increasing");
            if (!(pep >= 0.0 && pep <= 1.0))
                throw std::domain_error("table pep values must lie in [0,1]");
            prev = dist;
        }
    }

    double pep_at(double distance_m) const {
        if (distance_m < 0.0)
            throw std::domain_error("distance must be non-negative");
        if (kind == Kind::Disk) return distance_m <= radius_m ? eps : 1.0;
        if (distance_m <= table.front().first) return table.front().second;
        if (distance_m > table.back().first) return 1.0;
        for (std::size_t i = 1; i < table.size(); ++i) {
            if (distance_m <= table[i].first) {
                const auto& [d0, p0] = table[i - 1];
                const auto& [d1, p1] = table[i];
                const double t = (distance_m - d0) / (d1 - d0);
                return std::clamp(p0 + t * (p1 - p0), 0.0, 1.0);
            }
        }
        return 1.0;
    }
};

// Everything that determines one experiment. RSU j (0-based) sits at the
// center of its service area, x = (j + 0.5) * isd_m; the covered stretch is
// [0, rsu_count * isd_m]. The road width plays no role under a
// distance-only channel but stays configurable.
struct ScenarioConfig {
    std::size_t rsu_count = 4;
    double isd_m = 1200.0;
    double road_width_m = 10.0;
    std::size_t generation_size = 10;           // source packets per message (K)
    std::size_t transmissions_per_message = 15;  // coded packets per message (N)
    std::size_t interleaved_messages = 1;        // messages per reset window (d)
    std::size_t reset_area_span = 2;             // coverage areas per reset window (C)
    unsigned field_order = 256;
    ChannelModel channel;
    double eaves_pos_m = 1200.0;
    double eaves_range_m = 600.0;
    std::size_t packet_len = 64;
    std::size_t trials = 10000;
    std::uint64_t seed = 1;

    double rsu_pos_m(std::size_t j) const { return (double(j) + 0.5) * isd_m; }
    double window_len_m() const { return double(reset_area_span) * isd_m; }
    std::size_t epoch_count() const { return rsu_count / reset_area_span; }

    // The reset window the eavesdropper sits in; recovery and intercept
    // metrics are evaluated on that window's messages.
    std::size_t eaves_epoch() const {
        const auto e = std::size_t(eaves_pos_m / window_len_m());
        return std::min(e, epoch_count() - 1);
    }

    void validate() const {
        if (rsu_count < 2) throw std::domain_error("need at least 2 RSUs");
        if (!(isd_m > 0.0)) throw std::domain_error("isd_m must be positive");
        if (!(road_width_m >= 0.0)) throw std::domain_error("width_m must be non-negative");
        if (reset_area_span < 2)
            throw std::domain_error("reset area must span at least 2 coverage areas");
        if (reset_area_span > rsu_count)
            throw std::domain_error("reset area spans " + std::to_string(reset_area_span) +
                                    " coverage areas but only " + std::to_string(rsu_count) +
                                    " RSUs exist");
        if (generation_size < 2) throw std::domain_error("K must be at least 2");
        if (transmissions_per_message < generation_size)
            throw std::domain_error("N must be at least K");
        if (interleaved_messages < 1) throw std::domain_error("d must be at least 1");
        if (field_order != 2 && field_order != 256)
            throw std::domain_error("field order must be 2 or 256");
        if (!(eaves_pos_m >= 0.0 && eaves_pos_m <= double(rsu_count) * isd_m))
            throw std::domain_error("eavesdropper position must lie within the covered stretch");
        if (!(eaves_range_m >= 0.0))
            throw std::domain_error("eavesdropper range must be non-negative");
        if (packet_len < 1) throw std::domain_error("packet_len must be at least 1");
        if (trials < 1) throw std::domain_error("trials must be at least 1");
        channel.validate();
    }
};

struct Transmission {
    double x_m = 0.0;
    std::uint32_t message_index = 0;  // 1..d within the epoch
    std::uint32_t reset_epoch = 0;
};

struct TransmissionPlan {
    std::vector<Transmission> transmissions;
    std::size_t epoch_count = 0;
    std::size_t per_epoch = 0;  // N * d
};

// One coded packet per message in round-robin order, the N*d transmissions
// of each reset window spaced uniformly across its C coverage areas.
// floor(R/C) complete windows fit on the stretch.
inline TransmissionPlan build_schedule(const ScenarioConfig& cfg) {
    cfg.validate();
    TransmissionPlan plan;
    plan.epoch_count = cfg.epoch_count();
    plan.per_epoch = cfg.transmissions_per_message * cfg.interleaved_messages;
    plan.transmissions.reserve(plan.epoch_count * plan.per_epoch);
    const double spacing = cfg.window_len_m() / double(plan.per_epoch);
    for (std::size_t e = 0; e < plan.epoch_count; ++e) {
        const double start = double(e) * cfg.window_len_m();
        for (std::size_t t = 0; t < plan.per_epoch; ++t)
            plan.transmissions.push_back(
                {start + (double(t) + 0.5) * spacing,
                 std::uint32_t(t % cfg.interleaved_messages) + 1, std::uint32_t(e)});
    }
    return plan;
}

// The fog hears a transmission if any RSU does: 1 - prod_j pep(|x - x_j|).
inline double fog_success(const ScenarioConfig& cfg, double x_m) {
    double all_lost = 1.0;
    for (std::size_t j = 0; j < cfg.rsu_count; ++j)
        all_lost *= cfg.channel.pep_at(std::abs(x_m - cfg.rsu_pos_m(j)));
    return 1.0 - all_lost;
}

inline double eaves_success(const ScenarioConfig& cfg, double x_m) {
    const double dist = std::abs(x_m - cfg.eaves_pos_m);
    if (dist > cfg.eaves_range_m) return 0.0;
    return 1.0 - cfg.channel.pep_at(dist);
}

enum class Receiver { Fog, Eavesdropper };

// Per-transmission success probabilities for one message of the metric
// window, in transmission order; length N.
inline std::vector<double> success_probabilities(const TransmissionPlan& plan,
                                                 const ScenarioConfig& cfg,
                                                 Receiver receiver,
                                                 std::uint32_t message_index) {
    if (message_index < 1 || message_index > cfg.interleaved_messages)
        throw std::domain_error("message index " + std::to_string(message_index) +
                                " outside 1.." +
                                std::to_string(cfg.interleaved_messages));
    const auto epoch = std::uint32_t(cfg.eaves_epoch());
    std::vector<double> profile;
    profile.reserve(cfg.transmissions_per_message);
    for (const Transmission& tx : plan.transmissions) {
        if (tx.reset_epoch != epoch || tx.message_index != message_index) continue;
        profile.push_back(receiver == Receiver::Fog ? fog_success(cfg, tx.x_m)
                                                    : eaves_success(cfg, tx.x_m));
    }
    return profile;
}

struct MessageOutcome {
    bool fog_decoded = false;
    bool eaves_decoded = false;
};

// Reception geometry of one reset window, flattened for trial loops: per
// transmission, the message slot it carries plus the success probability of
// every link that can hear it at all.
struct EpochLinks {
    std::vector<std::uint32_t> message;      // per transmission, 0-based slot
    std::vector<double> eaves_prob;          // 0 when out of range
    std::vector<double> rsu_prob;            // flattened in-range link probs
    std::vector<std::uint32_t> rsu_begin;    // per transmission, +1 sentinel
};

inline EpochLinks epoch_links(const TransmissionPlan& plan, const ScenarioConfig& cfg,
                              std::size_t epoch) {
    if (epoch >= plan.epoch_count)
        throw std::domain_error("epoch " + std::to_string(epoch) + " outside 0.." +
                                std::to_string(plan.epoch_count - 1));
    EpochLinks links;
    for (const Transmission& tx : plan.transmissions) {
        if (tx.reset_epoch != std::uint32_t(epoch)) continue;
        links.message.push_back(tx.message_index - 1);
        links.eaves_prob.push_back(eaves_success(cfg, tx.x_m));
        links.rsu_begin.push_back(std::uint32_t(links.rsu_prob.size()));
        for (std::size_t j = 0; j < cfg.rsu_count; ++j) {
            const double pep = cfg.channel.pep_at(std::abs(tx.x_m - cfg.rsu_pos_m(j)));
            if (pep < 1.0) links.rsu_prob.push_back(1.0 - pep);
        }
    }
    links.rsu_begin.push_back(std::uint32_t(links.rsu_prob.size()));
    return links;
}

namespace detail {

// Decodability-only trial: coefficient vectors go through real incremental
// elimination, payloads are zero-length. A packet heard by several RSUs is
// ingested once per hearing RSU; the repeats cannot change the rank.
inline void run_trial_links(const EpochLinks& links, const gf::Field& field,
                            const ScenarioConfig& cfg,
                            std::vector<codec::Decoder>& fog,
                            std::vector<codec::Decoder>& eaves,
                            codec::CodedPacket& scratch, Rng& rng,
                            std::span<MessageOutcome> out) {
    for (auto& d : fog) d.reset();
    for (auto& d : eaves) d.reset();
    const std::size_t tx_count = links.message.size();
    for (std::size_t t = 0; t < tx_count; ++t) {
        unsigned rsu_hits = 0;
        for (std::uint32_t l = links.rsu_begin[t]; l < links.rsu_begin[t + 1]; ++l)
            if (rng.bernoulli(links.rsu_prob[l])) ++rsu_hits;
        const bool eaves_hit =
            links.eaves_prob[t] > 0.0 && rng.bernoulli(links.eaves_prob[t]);

        const std::uint32_t m = links.message[t];
        const bool fog_wants = rsu_hits > 0 && !fog[m].decodable();
        const bool eaves_wants = eaves_hit && !eaves[m].decodable();
        if (!fog_wants && !eaves_wants) continue;

        scratch.message_index = m + 1;
        for (auto& c : scratch.coeffs) c = rng.element(field.order());
        if (fog_wants)
            for (unsigned h = 0; h < rsu_hits; ++h) fog[m].ingest(scratch);
        if (eaves_wants) eaves[m].ingest(scratch);
    }
    for (std::size_t m = 0; m < cfg.interleaved_messages; ++m)
        out[m] = {fog[m].decodable(), eaves[m].decodable()};
}

}  // namespace detail

// One packet-level trial of the metric window: Bernoulli receptions per
// link, incremental decoding per message at the fog and the eavesdropper.
inline std::vector<MessageOutcome> run_trial(const TransmissionPlan& plan,
                                             const ScenarioConfig& cfg, Rng& rng) {
    cfg.validate();
    const gf::Field field(cfg.field_order);
    const EpochLinks links = epoch_links(plan, cfg, cfg.eaves_epoch());
    std::vector<codec::Decoder> fog, eaves;
    for (std::size_t m = 0; m < cfg.interleaved_messages; ++m) {
        fog.emplace_back(field, std::uint32_t(m + 1), cfg.generation_size, 0);
        eaves.emplace_back(field, std::uint32_t(m + 1), cfg.generation_size, 0);
    }
    codec::CodedPacket scratch;
    scratch.coeffs.assign(cfg.generation_size, 0);
    std::vector<MessageOutcome> out(cfg.interleaved_messages);
    detail::run_trial_links(links, field, cfg, fog, eaves, scratch, rng, out);
    return out;
}

// A probability estimate with its 95% normal-approximation half-width.
// When d > 1 the value is the average over the window's d messages and
// per_message carries the individual frequencies.
struct Estimate {
    double value = 0.0;
    std::size_t trials = 0;
    double ci_halfwidth = 0.0;
    std::vector<double> per_message;
};

struct MonteCarloResult {
    Estimate recovery;   // D
    Estimate intercept;  // I
};

namespace detail {

inline constexpr std::uint64_t kTrialStream = 0x6d632d7472ull;
inline constexpr double kZ95 = 1.959963984540054;

struct ChunkAccum {
    std::vector<std::uint64_t> fog_count;    // per message
    std::vector<std::uint64_t> eaves_count;  // per message
    std::uint64_t fog_k = 0, fog_k2 = 0;     // sums of per-trial decode counts
    std::uint64_t ev_k = 0, ev_k2 = 0;
};

inline Estimate make_estimate(std::span<const std::uint64_t> per_message_count,
                              std::uint64_t sum_k, std::uint64_t sum_k2,
                              std::size_t trials, std::size_t d) {
    Estimate est;
    est.trials = trials;
    est.per_message.reserve(d);
    for (std::size_t m = 0; m < d; ++m)
        est.per_message.push_back(double(per_message_count[m]) / double(trials));
    est.value = double(sum_k) / (double(trials) * double(d));
    if (trials > 1) {
        const double mean = est.value;
        const double sum_x2 = double(sum_k2) / (double(d) * double(d));
        double var = (sum_x2 - double(trials) * mean * mean) / double(trials - 1);
        var = std::max(var, 0.0);
        est.ci_halfwidth = kZ95 * std::sqrt(var / double(trials));
    }
    return est;
}

}  // namespace detail

// Estimates D and I over cfg.trials independent trials. Each trial runs on
// its own generator seeded from (seed, trial index) and chunk sums are
// reduced in fixed order, so the result is identical for any worker count.
inline MonteCarloResult run_monte_carlo(const ScenarioConfig& cfg,
                                        std::size_t override_workers = 0) {
    cfg.validate();
    const TransmissionPlan plan = build_schedule(cfg);
    const EpochLinks links = epoch_links(plan, cfg, cfg.eaves_epoch());
    const gf::Field field(cfg.field_order);
    const std::size_t d = cfg.interleaved_messages;

    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (cfg.trials + kChunk - 1) / kChunk;
    std::vector<detail::ChunkAccum> accum(chunks);

    for_each_chunk(cfg.trials, kChunk, worker_count(override_workers),
                   [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        detail::ChunkAccum acc;
        acc.fog_count.assign(d, 0);
        acc.eaves_count.assign(d, 0);
        std::vector<codec::Decoder> fog, eaves;
        for (std::size_t m = 0; m < d; ++m) {
            fog.emplace_back(field, std::uint32_t(m + 1), cfg.generation_size, 0);
            eaves.emplace_back(field, std::uint32_t(m + 1), cfg.generation_size, 0);
        }
        codec::CodedPacket scratch;
        scratch.coeffs.assign(cfg.generation_size, 0);
        std::vector<MessageOutcome> outcome(d);
        for (std::size_t trial = begin; trial < end; ++trial) {
            Rng rng(derive_seed(cfg.seed, detail::kTrialStream, trial));
            detail::run_trial_links(links, field, cfg, fog, eaves, scratch, rng,
                                    outcome);
            std::uint64_t fk = 0, ek = 0;
            for (std::size_t m = 0; m < d; ++m) {
                if (outcome[m].fog_decoded) { ++acc.fog_count[m]; ++fk; }
                if (outcome[m].eaves_decoded) { ++acc.eaves_count[m]; ++ek; }
            }
            acc.fog_k += fk;
            acc.fog_k2 += fk * fk;
            acc.ev_k += ek;
            acc.ev_k2 += ek * ek;
        }
        accum[chunk] = std::move(acc);
    });

    detail::ChunkAccum total;
    total.fog_count.assign(d, 0);
    total.eaves_count.assign(d, 0);
    for (const auto& acc : accum) {
        for (std::size_t m = 0; m < d; ++m) {
            total.fog_count[m] += acc.fog_count[m];
            total.eaves_count[m] += acc.eaves_count[m];
        }
        total.fog_k += acc.fog_k;
        total.fog_k2 += acc.fog_k2;
        total.ev_k += acc.ev_k;
        total.ev_k2 += acc.ev_k2;
    }

    MonteCarloResult result;
    result.recovery = detail::make_estimate(total.fog_count, total.fog_k,
                                            total.fog_k2, cfg.trials, d);
    result.intercept = detail::make_estimate(total.eaves_count, total.ev_k,
                                             total.ev_k2, cfg.trials, d);
    return result;
}

// Analytic counterparts on the same geometry, averaged over the metric
// window's messages.
struct AnalyticMetrics {
    double recovery = 0.0;
    double intercept = 0.0;
    std::vector<double> per_message_recovery;
    std::vector<double> per_message_intercept;
};

inline AnalyticMetrics analytic_metrics(const ScenarioConfig& cfg) {
    cfg.validate();
    const TransmissionPlan plan = build_schedule(cfg);
    AnalyticMetrics out;
    const std::size_t d = cfg.interleaved_messages;
    for (std::size_t m = 1; m <= d; ++m) {
        const auto fog = success_probabilities(plan, cfg, Receiver::Fog, std::uint32_t(m));
        const auto ev =
            success_probabilities(plan, cfg, Receiver::Eavesdropper, std::uint32_t(m));
        out.per_message_recovery.push_back(
            analytic::recovery_probability(fog, cfg.generation_size, cfg.field_order));
        out.per_message_intercept.push_back(
            analytic::intercept_probability(ev, cfg.generation_size, cfg.field_order));
    }
    for (double v : out.per_message_recovery) out.recovery += v;
    for (double v : out.per_message_intercept) out.intercept += v;
    out.recovery /= double(d);
    out.intercept /= double(d);
    return out;
}

}  // namespace rlncoff::sim
