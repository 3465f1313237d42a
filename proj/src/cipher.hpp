#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bitstream.hpp"

namespace hdasc {

// Counter-mode keystream built on a 20-round ARX permutation (ChaCha-style),
// 256-bit key, 64-bit nonce. Protects the experiment protocol; no security
// margin is claimed beyond keystream quality.
class KeystreamCipher {
public:
    KeystreamCipher(const std::array<uint8_t, 32>& key, uint64_t nonce);
    static KeystreamCipher from_hex(const std::string& key_hex, uint64_t nonce);

    // XOR the keystream (blocks from counter 0) into `data`; involution.
    void apply(std::vector<uint8_t>& data) const;

    std::vector<uint8_t> keystream(size_t bytes) const;

private:
    std::array<uint32_t, 8> key_words_{};
    uint64_t nonce_ = 0;
};

// Payload XOR with the header left intact; the encrypted flag records state.
Bitstream encrypt_bits(Bitstream bs, const KeystreamCipher& cipher);
Bitstream decrypt_bits(Bitstream bs, const KeystreamCipher& cipher);

}  // namespace hdasc
