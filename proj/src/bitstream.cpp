#include "bitstream.hpp"

#include <cmath>

#include "range_coder.hpp"

namespace hdasc {

namespace {

void push_u16(std::vector<uint8_t>& v, uint16_t x) {
    v.push_back(static_cast<uint8_t>(x & 0xff));
    v.push_back(static_cast<uint8_t>(x >> 8));
}

void push_u32(std::vector<uint8_t>& v, uint32_t x) {
    for (int i = 0; i < 4; ++i) v.push_back(static_cast<uint8_t>((x >> (8 * i)) & 0xff));
}

uint16_t read_u16(const uint8_t* p) { return static_cast<uint16_t>(p[0] | (p[1] << 8)); }

uint32_t read_u32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

constexpr uint32_t kMaxChannels = 4096;
constexpr uint32_t kMaxSymbolsPerChannel = 1u << 24;

}  // namespace

std::vector<uint8_t> Bitstream::serialize() const {
    if (counts.size() > kMaxChannels) throw FramingError("bitstream: too many channels");
    std::vector<uint8_t> out;
    out.reserve(header_bytes() + payload.size());
    push_u32(out, kMagic);
    out.push_back(version);
    push_u16(out, static_cast<uint16_t>(counts.size()));
    for (uint32_t c : counts) push_u32(out, c);
    out.push_back(flags);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

Bitstream Bitstream::parse(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 8) throw FramingError("bitstream: header truncated");
    if (read_u32(bytes.data()) != kMagic) throw FramingError("bitstream: bad magic");
    Bitstream bs;
    bs.version = bytes[4];
    if (bs.version != kVersion)
        throw FramingError("bitstream: unsupported version " + std::to_string(bs.version));
    const uint16_t channels = read_u16(bytes.data() + 5);
    if (channels > kMaxChannels) throw FramingError("bitstream: channel count out of range");
    const size_t need = 4 + 1 + 2 + 4 * static_cast<size_t>(channels) + 1;
    if (bytes.size() < need) throw FramingError("bitstream: header truncated");
    bs.counts.resize(channels);
    for (int c = 0; c < channels; ++c) {
        bs.counts[c] = read_u32(bytes.data() + 7 + 4 * c);
        if (bs.counts[c] > kMaxSymbolsPerChannel)
            throw FramingError("bitstream: symbol count out of range");
    }
    bs.flags = bytes[need - 1];
    bs.payload.assign(bytes.begin() + static_cast<long>(need), bytes.end());
    return bs;
}

Bitstream range_encode(const std::vector<std::vector<int32_t>>& symbols,
                       const CodingTable& table) {
    if (static_cast<int>(symbols.size()) != table.channels())
        throw EncodingError("range_encode: channel count mismatch with table");
    Bitstream bs;
    bs.counts.reserve(symbols.size());
    size_t total = 0;
    for (const auto& ch : symbols) {
        bs.counts.push_back(static_cast<uint32_t>(ch.size()));
        total += ch.size();
    }
    if (total == 0) return bs;  // header-only stream

    RangeEncoder enc(bs.payload);
    for (size_t c = 0; c < symbols.size(); ++c) {
        const auto& freq = table.freq[c];
        const auto& cum = table.cum[c];
        for (int32_t s : symbols[c]) {
            if (s < -table.support || static_cast<size_t>(s + table.support) >= freq.size())
                throw EncodingError("range_encode: symbol " + std::to_string(s) +
                                    " outside support");
            const size_t idx = static_cast<size_t>(s + table.support);
            enc.encode(cum[idx], freq[idx], 1u << 16);
        }
    }
    enc.flush();
    return bs;
}

std::vector<std::vector<int32_t>> range_decode(const Bitstream& bs, const CodingTable& table) {
    if (static_cast<int>(bs.counts.size()) != table.channels())
        throw FramingError("range_decode: channel count mismatch with table");
    std::vector<std::vector<int32_t>> out(bs.counts.size());
    if (bs.total_symbols() == 0) return out;

    RangeDecoder dec(bs.payload.data(), bs.payload.size());
    for (size_t c = 0; c < bs.counts.size(); ++c) {
        const auto& freq = table.freq[c];
        const auto& cum = table.cum[c];
        out[c].reserve(bs.counts[c]);
        for (uint32_t i = 0; i < bs.counts[c]; ++i) {
            const uint32_t f = dec.decode_freq(1u << 16);
            // binary search the cumulative row for the bin containing f
            size_t lo = 0, hi = cum.size() - 1;
            while (lo + 1 < hi) {
                const size_t mid = (lo + hi) / 2;
                if (cum[mid] <= f)
                    lo = mid;
                else
                    hi = mid;
            }
            dec.decode_update(cum[lo], freq[lo]);
            out[c].push_back(static_cast<int32_t>(lo) - table.support);
        }
    }
    return out;
}

double table_cross_entropy_bits(const std::vector<std::vector<int32_t>>& symbols,
                                const CodingTable& table) {
    double bits = 0.0;
    for (size_t c = 0; c < symbols.size(); ++c)
        for (int32_t s : symbols[c]) {
            const double p =
                static_cast<double>(table.freq[c][static_cast<size_t>(s + table.support)]) / 65536.0;
            bits -= std::log2(p);
        }
    return bits;
}

}  // namespace hdasc
