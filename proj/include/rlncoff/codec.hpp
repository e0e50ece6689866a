// RLNC codec: segment a symbol stream into fixed-size source messages,
// emit random linear combinations, decode incrementally as packets arrive.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlncoff/gf.hpp"
#include "rlncoff/rng.hpp"

namespace rlncoff::codec {

// A block of generation_size consecutive equal-length packets, encoded as
// one unit. index is the 1-based position of the message in the stream.
struct SourceMessage {
    std::uint32_t index = 0;
    std::size_t packet_len = 0;
    std::vector<std::vector<std::uint8_t>> packets;

    std::size_t generation_size() const { return packets.size(); }
};

struct CodedPacket {
    std::uint32_t message_index = 0;
    std::vector<std::uint8_t> coeffs;   // one per source packet of the message
    std::vector<std::uint8_t> payload;  // same linear combination of payloads
};

struct SegmentedStream {
    std::vector<SourceMessage> messages;
    std::size_t original_len = 0;  // symbols before zero-padding
};

// Splits data into messages of exactly generation_size packets each,
// zero-padding the tail. original_len is recorded for reassembly.
inline SegmentedStream segment_stream(const gf::Field& field,
                                      std::span<const std::uint8_t> data,
                                      std::size_t generation_size,
                                      std::size_t packet_len) {
    if (generation_size < 2)
        throw std::domain_error("generation size must be at least 2");
    if (packet_len < 1)
        throw std::domain_error("packet length must be at least 1");
    for (std::uint8_t v : data) field.check_element(v);

    SegmentedStream out;
    out.original_len = data.size();
    if (data.empty()) return out;

    const std::size_t message_symbols = generation_size * packet_len;
    const std::size_t count = (data.size() + message_symbols - 1) / message_symbols;
    out.messages.reserve(count);
    std::size_t pos = 0;
    for (std::size_t m = 0; m < count; ++m) {
        SourceMessage msg;
        msg.index = std::uint32_t(m + 1);
        msg.packet_len = packet_len;
        msg.packets.assign(generation_size, std::vector<std::uint8_t>(packet_len, 0));
        for (std::size_t k = 0; k < generation_size; ++k)
            for (std::size_t j = 0; j < packet_len && pos < data.size(); ++j, ++pos)
                msg.packets[k][j] = data[pos];
        out.messages.push_back(std::move(msg));
    }
    return out;
}

// Inverse of segment_stream: concatenate and drop the padding.
inline std::vector<std::uint8_t> reassemble_stream(
    const std::vector<SourceMessage>& messages, std::size_t original_len) {
    std::size_t available = 0;
    for (const auto& m : messages)
        for (const auto& p : m.packets) available += p.size();
    if (original_len > available)
        throw std::domain_error("original length " + std::to_string(original_len) +
                                " exceeds the " + std::to_string(available) +
                                " symbols available");
    std::vector<std::uint8_t> out;
    out.reserve(original_len);
    for (const auto& m : messages)
        for (const auto& p : m.packets) {
            for (std::uint8_t v : p) {
                if (out.size() == original_len) return out;
                out.push_back(v);
            }
        }
    return out;
}

// Deterministic-coefficient encoder; also the test hook behind encode_packet.
inline CodedPacket encode_with_coeffs(const gf::Field& field, const SourceMessage& msg,
                                      std::span<const std::uint8_t> coeffs) {
    if (coeffs.size() != msg.packets.size())
        throw std::domain_error("coefficient count does not match the generation size");
    CodedPacket pkt;
    pkt.message_index = msg.index;
    pkt.coeffs.assign(coeffs.begin(), coeffs.end());
    pkt.payload.assign(msg.packet_len, 0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const std::uint8_t c = coeffs[k];
        field.check_element(c);
        if (c == 0) continue;
        const auto& packet = msg.packets[k];
        if (packet.size() != msg.packet_len)
            throw std::domain_error("source packets must all have the stated length");
        for (std::size_t j = 0; j < msg.packet_len; ++j)
            pkt.payload[j] ^= field.mul(c, packet[j]);
    }
    return pkt;
}

// Coefficients are drawn independently and uniformly over the field; the
// all-zero vector is as legitimate a draw as any other.
inline CodedPacket encode_packet(const gf::Field& field, const SourceMessage& msg,
                                 Rng& rng) {
    std::vector<std::uint8_t> coeffs(msg.packets.size());
    for (auto& c : coeffs) c = rng.element(field.order());
    return encode_with_coeffs(field, msg, coeffs);
}

struct IngestResult {
    bool innovative = false;
    std::size_t rank = 0;
};

// Incremental Gaussian elimination over (coeffs | payload). Rows are kept
// in echelon form, normalized to a leading 1 at their pivot column. F_2
// coefficient rows are bit-packed with word-wide XOR reduction; payload
// symbols stay byte-per-symbol for both fields.
class Decoder {
public:
    Decoder(const gf::Field& field, std::uint32_t message_index,
            std::size_t generation_size, std::size_t payload_len)
        : field_(&field),
          message_index_(message_index),
          gen_size_(generation_size),
          payload_len_(payload_len),
          words_((generation_size + 63) / 64),
          pivot_row_(generation_size, kNoRow) {
        if (generation_size < 2)
            throw std::domain_error("generation size must be at least 2");
        if (field.order() == 2) {
            word_rows_.assign(gen_size_ * words_, 0);
            scratch_words_.assign(words_, 0);
        } else {
            coeff_rows_.assign(gen_size_ * gen_size_, 0);
            scratch_coeffs_.assign(gen_size_, 0);
        }
        payload_rows_.assign(gen_size_ * payload_len_, 0);
        scratch_payload_.assign(payload_len_, 0);
    }

    std::uint32_t message_index() const { return message_index_; }
    std::size_t generation_size() const { return gen_size_; }
    std::size_t payload_len() const { return payload_len_; }
    std::size_t rank() const { return rank_; }
    bool decodable() const { return rank_ == gen_size_; }

    // Forget all ingested packets but keep the allocations.
    void reset() {
        rank_ = 0;
        std::fill(pivot_row_.begin(), pivot_row_.end(), kNoRow);
    }

    IngestResult ingest(const CodedPacket& pkt) {
        if (pkt.message_index != message_index_)
            throw std::domain_error("packet for message " +
                                    std::to_string(pkt.message_index) +
                                    " fed to the decoder of message " +
                                    std::to_string(message_index_));
        if (pkt.coeffs.size() != gen_size_)
            throw std::domain_error("coefficient vector length " +
                                    std::to_string(pkt.coeffs.size()) +
                                    " does not match generation size " +
                                    std::to_string(gen_size_));
        if (pkt.payload.size() != payload_len_)
            throw std::domain_error("payload length does not match the decoder");
        for (std::uint8_t v : pkt.coeffs) field_->check_element(v);
        for (std::uint8_t v : pkt.payload) field_->check_element(v);

        std::copy(pkt.payload.begin(), pkt.payload.end(), scratch_payload_.begin());
        const bool innovative = field_->order() == 2 ? ingest_binary(pkt)
                                                     : ingest_bytes(pkt);
        return {innovative, rank_};
    }

    // The original packets, in order. Requires rank == generation size.
    std::vector<std::vector<std::uint8_t>> extract() const {
        if (!decodable())
            throw std::logic_error("decoder holds " + std::to_string(rank_) + "/" +
                                   std::to_string(gen_size_) +
                                   " independent packets; message not recoverable yet");
        return field_->order() == 2 ? extract_binary() : extract_bytes();
    }

private:
    static constexpr std::size_t kNoRow = SIZE_MAX;

    bool ingest_binary(const CodedPacket& pkt) {
        std::fill(scratch_words_.begin(), scratch_words_.end(), 0);
        for (std::size_t c = 0; c < gen_size_; ++c)
            if (pkt.coeffs[c])
                scratch_words_[c / 64] |= std::uint64_t(1) << (c % 64);

        for (std::size_t wi = 0; wi < words_; ++wi) {
            while (scratch_words_[wi] != 0) {
                const std::size_t col = wi * 64 + std::size_t(std::countr_zero(scratch_words_[wi]));
                const std::size_t row = pivot_row_[col];
                if (row == kNoRow) {
                    std::copy(scratch_words_.begin(), scratch_words_.end(),
                              word_rows_.begin() + long(rank_ * words_));
                    std::copy(scratch_payload_.begin(), scratch_payload_.end(),
                              payload_rows_.begin() + long(rank_ * payload_len_));
                    pivot_row_[col] = rank_;
                    ++rank_;
                    return true;
                }
                const std::uint64_t* rw = &word_rows_[row * words_];
                for (std::size_t k = wi; k < words_; ++k) scratch_words_[k] ^= rw[k];
                const std::uint8_t* rp = &payload_rows_[row * payload_len_];
                for (std::size_t j = 0; j < payload_len_; ++j) scratch_payload_[j] ^= rp[j];
            }
        }
        return false;
    }

    bool ingest_bytes(const CodedPacket& pkt) {
        std::copy(pkt.coeffs.begin(), pkt.coeffs.end(), scratch_coeffs_.begin());
        for (std::size_t col = 0; col < gen_size_; ++col) {
            const std::uint8_t c = scratch_coeffs_[col];
            if (c == 0) continue;
            const std::size_t row = pivot_row_[col];
            if (row == kNoRow) {
                const std::uint8_t lead_inv = field_->inv(c);
                std::uint8_t* dst = &coeff_rows_[rank_ * gen_size_];
                for (std::size_t j = 0; j < gen_size_; ++j)
                    dst[j] = j < col ? 0 : field_->mul(lead_inv, scratch_coeffs_[j]);
                std::uint8_t* dp = &payload_rows_[rank_ * payload_len_];
                for (std::size_t j = 0; j < payload_len_; ++j)
                    dp[j] = field_->mul(lead_inv, scratch_payload_[j]);
                pivot_row_[col] = rank_;
                ++rank_;
                return true;
            }
            const std::uint8_t* rc = &coeff_rows_[row * gen_size_];
            scratch_coeffs_[col] = 0;
            for (std::size_t j = col + 1; j < gen_size_; ++j)
                scratch_coeffs_[j] ^= field_->mul(c, rc[j]);
            const std::uint8_t* rp = &payload_rows_[row * payload_len_];
            for (std::size_t j = 0; j < payload_len_; ++j)
                scratch_payload_[j] ^= field_->mul(c, rp[j]);
        }
        return false;
    }

    std::vector<std::vector<std::uint8_t>> extract_binary() const {
        // Rows reordered by pivot column, then cleared above each pivot.
        std::vector<std::uint64_t> w(gen_size_ * words_);
        std::vector<std::uint8_t> p(gen_size_ * payload_len_);
        for (std::size_t col = 0; col < gen_size_; ++col) {
            const std::size_t row = pivot_row_[col];
            std::copy_n(&word_rows_[row * words_], words_, &w[col * words_]);
            std::copy_n(&payload_rows_[row * payload_len_], payload_len_,
                        &p[col * payload_len_]);
        }
        for (std::size_t col = gen_size_; col-- > 1;) {
            for (std::size_t r = 0; r < col; ++r) {
                if ((w[r * words_ + col / 64] >> (col % 64) & 1u) == 0) continue;
                for (std::size_t k = col / 64; k < words_; ++k)
                    w[r * words_ + k] ^= w[col * words_ + k];
                for (std::size_t j = 0; j < payload_len_; ++j)
                    p[r * payload_len_ + j] ^= p[col * payload_len_ + j];
            }
        }
        std::vector<std::vector<std::uint8_t>> out(gen_size_);
        for (std::size_t k = 0; k < gen_size_; ++k)
            out[k].assign(&p[k * payload_len_], &p[k * payload_len_] + payload_len_);
        return out;
    }

    std::vector<std::vector<std::uint8_t>> extract_bytes() const {
        std::vector<std::uint8_t> a(gen_size_ * gen_size_);
        std::vector<std::uint8_t> p(gen_size_ * payload_len_);
        for (std::size_t col = 0; col < gen_size_; ++col) {
            const std::size_t row = pivot_row_[col];
            std::copy_n(&coeff_rows_[row * gen_size_], gen_size_, &a[col * gen_size_]);
            std::copy_n(&payload_rows_[row * payload_len_], payload_len_,
                        &p[col * payload_len_]);
        }
        for (std::size_t col = gen_size_; col-- > 1;) {
            for (std::size_t r = 0; r < col; ++r) {
                const std::uint8_t c = a[r * gen_size_ + col];
                if (c == 0) continue;
                a[r * gen_size_ + col] = 0;
                for (std::size_t j = 0; j < payload_len_; ++j)
                    p[r * payload_len_ + j] ^=
                        field_->mul(c, p[col * payload_len_ + j]);
            }
        }
        std::vector<std::vector<std::uint8_t>> out(gen_size_);
        for (std::size_t k = 0; k < gen_size_; ++k)
            out[k].assign(&p[k * payload_len_], &p[k * payload_len_] + payload_len_);
        return out;
    }

    const gf::Field* field_;
    std::uint32_t message_index_;
    std::size_t gen_size_;
    std::size_t payload_len_;
    std::size_t words_;
    std::size_t rank_ = 0;
    std::vector<std::size_t> pivot_row_;
    std::vector<std::uint64_t> word_rows_;
    std::vector<std::uint8_t> coeff_rows_;
    std::vector<std::uint8_t> payload_rows_;
    std::vector<std::uint64_t> scratch_words_;
    std::vector<std::uint8_t> scratch_coeffs_;
    std::vector<std::uint8_t> scratch_payload_;
};

// Wire layout: message_index u32 LE, coefficient count u16 LE, coefficient
// bytes, payload bytes.
inline std::vector<std::uint8_t> serialize_packet(const CodedPacket& pkt) {
    if (pkt.coeffs.size() > 0xFFFF)
        throw std::domain_error("coefficient vector too long to serialize");
    std::vector<std::uint8_t> out;
    out.reserve(6 + pkt.coeffs.size() + pkt.payload.size());
    for (int i = 0; i < 4; ++i)
        out.push_back(std::uint8_t(pkt.message_index >> (8 * i)));
    const std::uint16_t k = std::uint16_t(pkt.coeffs.size());
    out.push_back(std::uint8_t(k & 0xFF));
    out.push_back(std::uint8_t(k >> 8));
    out.insert(out.end(), pkt.coeffs.begin(), pkt.coeffs.end());
    out.insert(out.end(), pkt.payload.begin(), pkt.payload.end());
    return out;
}

inline CodedPacket parse_packet(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 6)
        throw std::domain_error("coded packet truncated: header needs 6 bytes");
    CodedPacket pkt;
    pkt.message_index = std::uint32_t(bytes[0]) | std::uint32_t(bytes[1]) << 8 |
                        std::uint32_t(bytes[2]) << 16 | std::uint32_t(bytes[3]) << 24;
    const std::size_t k = std::size_t(bytes[4]) | std::size_t(bytes[5]) << 8;
    if (bytes.size() < 6 + k)
        throw std::domain_error("coded packet truncated: " + std::to_string(k) +
                                " coefficients declared, " +
                                std::to_string(bytes.size() - 6) + " bytes left");
    pkt.coeffs.assign(bytes.begin() + 6, bytes.begin() + 6 + long(k));
    pkt.payload.assign(bytes.begin() + 6 + long(k), bytes.end());
    return pkt;
}

}  // namespace rlncoff::codec
