#pragma once

#include "entropy_model.hpp"

namespace hdasc {

// Entropy-coded payload framing. Wire layout, little-endian:
//   u32 magic 0x48444143, u8 version=1, u16 channel count,
//   u32 symbol count per channel, u8 flags (bit 0: encrypted), payload bytes.
struct Bitstream {
    static constexpr uint32_t kMagic = 0x48444143u;
    static constexpr uint8_t kVersion = 1;
    static constexpr uint8_t kFlagEncrypted = 0x01;

    uint8_t version = kVersion;
    std::vector<uint32_t> counts;  // symbols per channel
    uint8_t flags = 0;
    std::vector<uint8_t> payload;

    bool encrypted() const { return flags & kFlagEncrypted; }
    size_t total_symbols() const {
        size_t n = 0;
        for (uint32_t c : counts) n += c;
        return n;
    }
    size_t header_bytes() const { return 4 + 1 + 2 + 4 * counts.size() + 1; }

    std::vector<uint8_t> serialize() const;
    static Bitstream parse(const std::vector<uint8_t>& bytes);
};

// Channel-wise arithmetic coding of quantized symbols against the shared
// fixed-point table. Symbols outside the table support are an error.
Bitstream range_encode(const std::vector<std::vector<int32_t>>& symbols, const CodingTable& table);
std::vector<std::vector<int32_t>> range_decode(const Bitstream& bs, const CodingTable& table);

// Ideal coded size of `symbols` under the table: sum of -log2 p in bits.
double table_cross_entropy_bits(const std::vector<std::vector<int32_t>>& symbols,
                                const CodingTable& table);

}  // namespace hdasc
