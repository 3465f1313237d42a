#include "cipher.hpp"

namespace hdasc {

namespace {

uint32_t rotl32(uint32_t x, int k) { return (x << k) | (x >> (32 - k)); }

void quarter_round(uint32_t& a, uint32_t& b, uint32_t& c, uint32_t& d) {
    a += b; d ^= a; d = rotl32(d, 16);
    c += d; b ^= c; b = rotl32(b, 12);
    a += b; d ^= a; d = rotl32(d, 8);
    c += d; b ^= c; b = rotl32(b, 7);
}

void block(const std::array<uint32_t, 8>& key, uint64_t counter, uint64_t nonce,
           uint8_t out[64]) {
    uint32_t s[16] = {0x61707865u, 0x3320646eu, 0x79622d32u, 0x6b206574u,
                      key[0], key[1], key[2], key[3], key[4], key[5], key[6], key[7],
                      static_cast<uint32_t>(counter), static_cast<uint32_t>(counter >> 32),
                      static_cast<uint32_t>(nonce), static_cast<uint32_t>(nonce >> 32)};
    uint32_t w[16];
    for (int i = 0; i < 16; ++i) w[i] = s[i];
    for (int round = 0; round < 10; ++round) {
        quarter_round(w[0], w[4], w[8], w[12]);
        quarter_round(w[1], w[5], w[9], w[13]);
        quarter_round(w[2], w[6], w[10], w[14]);
        quarter_round(w[3], w[7], w[11], w[15]);
        quarter_round(w[0], w[5], w[10], w[15]);
        quarter_round(w[1], w[6], w[11], w[12]);
        quarter_round(w[2], w[7], w[8], w[13]);
        quarter_round(w[3], w[4], w[9], w[14]);
    }
    for (int i = 0; i < 16; ++i) {
        const uint32_t v = w[i] + s[i];
        out[4 * i] = static_cast<uint8_t>(v);
        out[4 * i + 1] = static_cast<uint8_t>(v >> 8);
        out[4 * i + 2] = static_cast<uint8_t>(v >> 16);
        out[4 * i + 3] = static_cast<uint8_t>(v >> 24);
    }
}

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

KeystreamCipher::KeystreamCipher(const std::array<uint8_t, 32>& key, uint64_t nonce)
    : nonce_(nonce) {
    for (int i = 0; i < 8; ++i)
        key_words_[i] = static_cast<uint32_t>(key[4 * i]) |
                        (static_cast<uint32_t>(key[4 * i + 1]) << 8) |
                        (static_cast<uint32_t>(key[4 * i + 2]) << 16) |
                        (static_cast<uint32_t>(key[4 * i + 3]) << 24);
}

KeystreamCipher KeystreamCipher::from_hex(const std::string& key_hex, uint64_t nonce) {
    if (key_hex.size() != 64) throw ConfigError("cipher key must be 64 hex characters");
    std::array<uint8_t, 32> key{};
    for (int i = 0; i < 32; ++i) {
        const int hi = hex_nibble(key_hex[2 * i]), lo = hex_nibble(key_hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw ConfigError("cipher key contains non-hex characters");
        key[i] = static_cast<uint8_t>((hi << 4) | lo);
    }
    return KeystreamCipher(key, nonce);
}

std::vector<uint8_t> KeystreamCipher::keystream(size_t bytes) const {
    std::vector<uint8_t> out(bytes);
    uint8_t blk[64];
    for (size_t off = 0; off < bytes; off += 64) {
        block(key_words_, off / 64, nonce_, blk);
        const size_t n = std::min<size_t>(64, bytes - off);
        for (size_t i = 0; i < n; ++i) out[off + i] = blk[i];
    }
    return out;
}

void KeystreamCipher::apply(std::vector<uint8_t>& data) const {
    std::vector<uint8_t> ks = keystream(data.size());
    for (size_t i = 0; i < data.size(); ++i) data[i] ^= ks[i];
}

Bitstream encrypt_bits(Bitstream bs, const KeystreamCipher& cipher) {
    cipher.apply(bs.payload);
    bs.flags |= Bitstream::kFlagEncrypted;
    return bs;
}

Bitstream decrypt_bits(Bitstream bs, const KeystreamCipher& cipher) {
    cipher.apply(bs.payload);
    bs.flags &= static_cast<uint8_t>(~Bitstream::kFlagEncrypted);
    return bs;
}

}  // namespace hdasc
