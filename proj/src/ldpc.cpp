#include "ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hdasc {

std::string default_data_dir() {
    if (const char* env = std::getenv("HDASC_DATA_DIR")) return env;
#ifdef HDASC_DEFAULT_DATA_DIR
    return HDASC_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

LdpcCode LdpcCode::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("ldpc: cannot open parity file " + path);
    LdpcCode code;
    std::string line;
    int max_col = -1;
    std::vector<std::pair<int, std::vector<int>>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        int check;
        if (!(ss >> check)) continue;
        std::vector<int> cols;
        int c;
        while (ss >> c) {
            cols.push_back(c);
            max_col = std::max(max_col, c);
        }
        if (cols.empty()) throw ConfigError("ldpc: empty check row in " + path);
        rows.emplace_back(check, std::move(cols));
    }
    if (rows.empty()) throw ConfigError("ldpc: no checks in " + path);
    code.m_ = 0;
    for (auto& [idx, cols] : rows) code.m_ = std::max(code.m_, idx + 1);
    code.n_ = max_col + 1;
    code.k_ = code.n_ - code.m_;
    if (code.k_ <= 0) throw ConfigError("ldpc: matrix has no information columns");
    code.check_cols_.resize(code.m_);
    for (auto& [idx, cols] : rows) {
        std::sort(cols.begin(), cols.end());
        code.check_cols_[idx] = cols;
    }
    code.var_checks_.resize(code.n_);
    for (int i = 0; i < code.m_; ++i)
        for (int c : code.check_cols_[i]) {
            if (c < 0 || c >= code.n_) throw ConfigError("ldpc: column index out of range");
            code.var_checks_[c].push_back(i);
        }
    code.build_encoder();
    return code;
}

// Solves Hp * P = Ha over GF(2), where Hp is the square submatrix on the last
// m columns. Stores P column-by-column for XOR-based encoding.
void LdpcCode::build_encoder() {
    parity_words_ = (m_ + 63) / 64;
    // rows of [Hp | Ha] as bitsets: parity part plus one column of identity tracking
    // Use Gauss-Jordan on Hp while applying the same ops to Ha.
    const int words_p = parity_words_;
    const int words_a = (k_ + 63) / 64;
    std::vector<std::vector<uint64_t>> hp(m_, std::vector<uint64_t>(words_p, 0));
    std::vector<std::vector<uint64_t>> ha(m_, std::vector<uint64_t>(words_a, 0));
    for (int i = 0; i < m_; ++i)
        for (int c : check_cols_[i]) {
            if (c >= k_)
                hp[i][(c - k_) >> 6] |= 1ull << ((c - k_) & 63);
            else
                ha[i][c >> 6] |= 1ull << (c & 63);
        }
    // Gauss-Jordan elimination of hp
    std::vector<int> pivot_row(m_, -1);
    int rank = 0;
    for (int col = 0; col < m_; ++col) {
        int pr = -1;
        for (int r = rank; r < m_; ++r)
            if ((hp[r][col >> 6] >> (col & 63)) & 1ull) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(hp[pr], hp[rank]);
        std::swap(ha[pr], ha[rank]);
        for (int r = 0; r < m_; ++r) {
            if (r == rank) continue;
            if ((hp[r][col >> 6] >> (col & 63)) & 1ull) {
                for (int w = 0; w < words_p; ++w) hp[r][w] ^= hp[rank][w];
                for (int w = 0; w < words_a; ++w) ha[r][w] ^= ha[rank][w];
            }
        }
        pivot_row[col] = rank;
        ++rank;
    }
    if (rank != m_)
        throw ConfigError("ldpc: parity submatrix is singular; cannot build systematic encoder");
    // After Gauss-Jordan, row pivot_row[col] expresses parity bit `col`:
    // p[col] = ha_row . u
    gen_cols_.assign(k_, std::vector<uint64_t>(words_p, 0));
    for (int col = 0; col < m_; ++col) {
        const int r = pivot_row[col];
        for (int j = 0; j < k_; ++j)
            if ((ha[r][j >> 6] >> (j & 63)) & 1ull)
                gen_cols_[j][col >> 6] |= 1ull << (col & 63);
    }
}

std::vector<uint8_t> LdpcCode::encode(const std::vector<uint8_t>& info) const {
    if (static_cast<int>(info.size()) != k_)
        throw DimensionError("ldpc encode: expected " + std::to_string(k_) + " info bits, got " +
                             std::to_string(info.size()));
    std::vector<uint64_t> parity(parity_words_, 0);
    for (int j = 0; j < k_; ++j)
        if (info[j])
            for (int w = 0; w < parity_words_; ++w) parity[w] ^= gen_cols_[j][w];
    std::vector<uint8_t> cw(n_);
    std::copy(info.begin(), info.end(), cw.begin());
    for (int i = 0; i < m_; ++i) cw[k_ + i] = static_cast<uint8_t>((parity[i >> 6] >> (i & 63)) & 1ull);
    return cw;
}

bool LdpcCode::parity_ok(const std::vector<uint8_t>& codeword) const {
    for (const auto& cols : check_cols_) {
        int acc = 0;
        for (int c : cols) acc ^= codeword[c];
        if (acc) return false;
    }
    return true;
}

LdpcCode::DecodeResult LdpcCode::decode(const std::vector<double>& llrs, int max_iters,
                                        double norm_factor) const {
    if (static_cast<int>(llrs.size()) != n_)
        throw DimensionError("ldpc decode: expected " + std::to_string(n_) + " LLRs");
    for (double l : llrs)
        if (!std::isfinite(l)) throw DomainError("ldpc decode: non-finite LLR");

    // edge storage: per check, messages to its variables
    std::vector<std::vector<double>> c2v(m_);
    for (int i = 0; i < m_; ++i) c2v[i].assign(check_cols_[i].size(), 0.0);

    std::vector<double> posterior(llrs);
    std::vector<uint8_t> hard(n_);
    DecodeResult res;

    auto harden = [&]() {
        for (int v = 0; v < n_; ++v) hard[v] = posterior[v] < 0.0 ? 1 : 0;
    };
    harden();
    if (parity_ok(hard)) {
        res.converged = true;
        res.iterations = 0;
        res.info.assign(hard.begin(), hard.begin() + k_);
        return res;
    }

    for (int iter = 1; iter <= max_iters; ++iter) {
        for (int i = 0; i < m_; ++i) {
            const auto& cols = check_cols_[i];
            // v2c = posterior - previous c2v; find the two smallest magnitudes
            double min1 = 1e300, min2 = 1e300;
            int arg1 = -1;
            int sign_prod = 1;
            for (size_t e = 0; e < cols.size(); ++e) {
                const double v2c = posterior[cols[e]] - c2v[i][e];
                const double mag = std::abs(v2c);
                if (v2c < 0.0) sign_prod = -sign_prod;
                if (mag < min1) {
                    min2 = min1;
                    min1 = mag;
                    arg1 = static_cast<int>(e);
                } else if (mag < min2) {
                    min2 = mag;
                }
            }
            for (size_t e = 0; e < cols.size(); ++e) {
                const double v2c = posterior[cols[e]] - c2v[i][e];
                const double mag = (static_cast<int>(e) == arg1) ? min2 : min1;
                int sign = sign_prod;
                if (v2c < 0.0) sign = -sign;
                const double msg = norm_factor * sign * mag;
                posterior[cols[e]] += msg - c2v[i][e];
                c2v[i][e] = msg;
            }
        }
        harden();
        res.iterations = iter;
        if (parity_ok(hard)) {
            res.converged = true;
            break;
        }
    }
    res.info.assign(hard.begin(), hard.begin() + k_);
    return res;
}

}  // namespace hdasc
