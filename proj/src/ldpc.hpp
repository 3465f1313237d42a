#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace hdasc {

// Binary LDPC code loaded from a plain-text sparse parity-check matrix
// (one line per check: check index followed by its column indices).
// Encoding is systematic: info bits occupy the first k positions and the
// parity block solves H c = 0 through the precomputed inverse of the last
// (n-k) columns of H.
class LdpcCode {
public:
    static LdpcCode load(const std::string& path);

    int n() const { return n_; }
    int k() const { return k_; }
    double rate() const { return static_cast<double>(k_) / n_; }

    std::vector<uint8_t> encode(const std::vector<uint8_t>& info) const;

    struct DecodeResult {
        std::vector<uint8_t> info;
        bool converged = false;
        int iterations = 0;
    };

    // Normalized min-sum belief propagation (LLR > 0 means bit 0), early exit
    // on parity satisfaction; `converged` reports the final parity status.
    DecodeResult decode(const std::vector<double>& llrs, int max_iters = 20,
                        double norm_factor = 0.8) const;

    bool parity_ok(const std::vector<uint8_t>& codeword) const;

    const std::vector<std::vector<int>>& checks() const { return check_cols_; }

private:
    void build_encoder();

    int n_ = 0, m_ = 0, k_ = 0;
    std::vector<std::vector<int>> check_cols_;  // per check: column indices
    std::vector<std::vector<int>> var_checks_;  // per variable: check indices
    // parity solver: parity word = XOR of columns gen_cols_[j] over set info bits j
    std::vector<std::vector<uint64_t>> gen_cols_;
    int parity_words_ = 0;
};

// Default on-disk locations (overridable through config).
std::string default_data_dir();

}  // namespace hdasc
