#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace hdasc {

// Carry-less range coder: 32-bit state, byte-wise renormalization, byte
// aligned output. Frequencies are 16-bit fixed point (total = 1<<16).
class RangeEncoder {
public:
    explicit RangeEncoder(std::vector<uint8_t>& out) : out_(out) {}

    void encode(uint32_t cum, uint32_t freq, uint32_t total) {
        if (freq == 0 || cum + freq > total) throw EncodingError("range encoder: bad interval");
        range_ /= total;
        low_ += cum * range_;
        range_ *= freq;
        normalize();
    }

    // Terminates the stream; exactly four tail bytes.
    void flush() {
        for (int i = 0; i < 4; ++i) {
            out_.push_back(static_cast<uint8_t>(low_ >> 24));
            low_ <<= 8;
        }
    }

private:
    void normalize() {
        while ((low_ ^ (low_ + range_)) < kTop ||
               (range_ < kBottom && ((range_ = (0u - low_) & (kBottom - 1)), true))) {
            out_.push_back(static_cast<uint8_t>(low_ >> 24));
            low_ <<= 8;
            range_ <<= 8;
        }
    }

    static constexpr uint32_t kTop = 1u << 24;
    static constexpr uint32_t kBottom = 1u << 16;

    std::vector<uint8_t>& out_;
    uint32_t low_ = 0;
    uint32_t range_ = 0xffffffffu;
};

class RangeDecoder {
public:
    RangeDecoder(const uint8_t* data, size_t size) : data_(data), size_(size) {
        for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
    }

    // Cumulative frequency of the next symbol, in [0, total).
    uint32_t decode_freq(uint32_t total) {
        range_ /= total;
        const uint32_t v = (code_ - low_) / range_;
        return v >= total ? total - 1 : v;
    }

    void decode_update(uint32_t cum, uint32_t freq) {
        low_ += cum * range_;
        range_ *= freq;
        while ((low_ ^ (low_ + range_)) < kTop ||
               (range_ < kBottom && ((range_ = (0u - low_) & (kBottom - 1)), true))) {
            code_ = (code_ << 8) | next_byte();
            low_ <<= 8;
            range_ <<= 8;
        }
    }

private:
    // Exhausted input feeds zero bytes; corrupted payloads then decode to
    // arbitrary in-range symbols instead of failing, which the framing layer
    // reports via symbol counts.
    uint8_t next_byte() { return pos_ < size_ ? data_[pos_++] : 0; }

    static constexpr uint32_t kTop = 1u << 24;
    static constexpr uint32_t kBottom = 1u << 16;

    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
    uint32_t low_ = 0;
    uint32_t range_ = 0xffffffffu;
    uint32_t code_ = 0;
};

}  // namespace hdasc
