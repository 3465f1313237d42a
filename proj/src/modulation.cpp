#include "modulation.hpp"

#include <cmath>

namespace hdasc {

int bits_per_symbol(Modulation m) {
    switch (m) {
        case Modulation::BPSK: return 1;
        case Modulation::QPSK: return 2;
        case Modulation::QAM16: return 4;
    }
    throw DomainError("unknown modulation");
}

std::string modulation_name(Modulation m) {
    switch (m) {
        case Modulation::BPSK: return "BPSK";
        case Modulation::QPSK: return "QPSK";
        case Modulation::QAM16: return "16QAM";
    }
    return "?";
}

namespace {

// Gray mapping of two bits onto one 4-level axis, unit-ish levels before
// common scaling: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
double gray_axis(int b_hi, int b_lo) {
    static const double levels[4] = {-3.0, -1.0, +1.0, +3.0};
    const int idx = b_hi ? (b_lo ? 2 : 3) : (b_lo ? 1 : 0);
    return levels[idx];
}

}  // namespace

std::vector<cplx> constellation(Modulation m) {
    switch (m) {
        case Modulation::BPSK:
            return {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
        case Modulation::QPSK: {
            const double a = 1.0 / std::sqrt(2.0);
            std::vector<cplx> pts(4);
            for (int b = 0; b < 4; ++b) {
                const int b0 = (b >> 1) & 1, b1 = b & 1;
                pts[b] = cplx(b0 ? -a : a, b1 ? -a : a);
            }
            return pts;
        }
        case Modulation::QAM16: {
            const double s = 1.0 / std::sqrt(10.0);
            std::vector<cplx> pts(16);
            for (int b = 0; b < 16; ++b) {
                const int b0 = (b >> 3) & 1, b1 = (b >> 2) & 1, b2 = (b >> 1) & 1, b3 = b & 1;
                pts[b] = cplx(gray_axis(b0, b1) * s, gray_axis(b2, b3) * s);
            }
            return pts;
        }
    }
    throw DomainError("unknown modulation");
}

std::vector<cplx> modulate(const std::vector<uint8_t>& bits, Modulation m) {
    const int bps = bits_per_symbol(m);
    if (bits.size() % bps != 0)
        throw DimensionError("modulate: " + std::to_string(bits.size()) +
                             " bits not divisible by " + std::to_string(bps));
    const std::vector<cplx> pts = constellation(m);
    std::vector<cplx> out;
    out.reserve(bits.size() / bps);
    for (size_t i = 0; i < bits.size(); i += bps) {
        int idx = 0;
        for (int b = 0; b < bps; ++b) idx = (idx << 1) | (bits[i + b] & 1);
        out.push_back(pts[idx]);
    }
    return out;
}

std::vector<double> demodulate_soft(const std::vector<cplx>& symbols, Modulation m,
                                    double noise_var, bool max_log, double llr_max) {
    const int bps = bits_per_symbol(m);
    const std::vector<cplx> pts = constellation(m);
    const double sigma2 = std::max(noise_var, 1e-12);
    std::vector<double> llrs;
    llrs.reserve(symbols.size() * bps);
    std::vector<double> metric(pts.size());
    for (const cplx& y : symbols) {
        for (size_t s = 0; s < pts.size(); ++s) {
            const cplx d = y - pts[s];
            metric[s] = -(d.real() * d.real() + d.imag() * d.imag()) / sigma2;
        }
        for (int b = 0; b < bps; ++b) {
            const int mask = 1 << (bps - 1 - b);
            double llr;
            if (max_log) {
                double m0 = -1e300, m1 = -1e300;
                for (size_t s = 0; s < pts.size(); ++s)
                    ((s & mask) ? m1 : m0) = std::max((s & mask) ? m1 : m0, metric[s]);
                llr = m0 - m1;
            } else {
                // log-sum-exp over the two bit cosets
                double max0 = -1e300, max1 = -1e300;
                for (size_t s = 0; s < pts.size(); ++s)
                    ((s & mask) ? max1 : max0) = std::max((s & mask) ? max1 : max0, metric[s]);
                double e0 = 0.0, e1 = 0.0;
                for (size_t s = 0; s < pts.size(); ++s) {
                    if (s & mask)
                        e1 += std::exp(metric[s] - max1);
                    else
                        e0 += std::exp(metric[s] - max0);
                }
                llr = (max0 + std::log(e0)) - (max1 + std::log(e1));
            }
            llrs.push_back(std::clamp(llr, -llr_max, llr_max));
        }
    }
    return llrs;
}

AmcLadder::AmcLadder(std::vector<double> thresholds) {
    if (thresholds.size() != 5) throw ConfigError("amc: ladder expects 5 thresholds");
    entries_ = {
        {0.5, Modulation::BPSK, 0.5, thresholds[0]},
        {0.5, Modulation::QPSK, 1.0, thresholds[1]},
        {0.75, Modulation::QPSK, 1.5, thresholds[2]},
        {0.5, Modulation::QAM16, 2.0, thresholds[3]},
        {0.75, Modulation::QAM16, 3.0, thresholds[4]},
    };
    for (size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].threshold_db <= entries_[i - 1].threshold_db)
            throw ConfigError("amc: thresholds must be strictly increasing");
}

// Calibrated on AWGN with the shipped codes: 0.25 dB grid, 800 blocks per
// point, BLER target 1e-2 (calibrate_amc_thresholds, seed 20260808).
std::vector<double> AmcLadder::default_thresholds() { return {0.75, 3.5, 5.5, 9.5, 11.5}; }

const AmcEntry& AmcLadder::select(double snr_db) const {
    return entries_[select_index(snr_db)];
}

int AmcLadder::select_index(double snr_db) const {
    int best = 0;
    for (size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].threshold_db <= snr_db) best = static_cast<int>(i);
    return best;
}

std::vector<double> calibrate_amc_thresholds(const LdpcCode& rate12, const LdpcCode& rate34,
                                             double snr_min_db, double snr_max_db, double step_db,
                                             int blocks_per_point, double target_bler,
                                             uint64_t seed) {
    AmcLadder nominal;  // for (rate, modulation) pairs only
    std::vector<double> thresholds;
    for (const AmcEntry& e : nominal.entries()) {
        const LdpcCode& code = e.code_rate < 0.6 ? rate12 : rate34;
        double found = snr_max_db;
        for (double snr = snr_min_db; snr <= snr_max_db + 1e-9; snr += step_db) {
            const double sigma2 = std::pow(10.0, -snr / 10.0);
            Rng rng(derive_seed(seed, static_cast<uint64_t>(snr * 97 + 3000),
                                static_cast<uint64_t>(e.efficiency * 4)));
            int errors = 0;
            const int max_errors = std::max(2, static_cast<int>(blocks_per_point * target_bler));
            for (int blk = 0; blk < blocks_per_point; ++blk) {
                std::vector<uint8_t> info(code.k());
                for (auto& b : info) b = static_cast<uint8_t>(rng.next_below(2));
                std::vector<cplx> tx = modulate(code.encode(info), e.modulation);
                const double ns = std::sqrt(sigma2 / 2.0);
                for (auto& s : tx) s += cplx(rng.normal(0.0, ns), rng.normal(0.0, ns));
                auto res = code.decode(demodulate_soft(tx, e.modulation, sigma2));
                if (!res.converged || res.info != info) ++errors;
                if (errors > max_errors) break;  // point already failed
            }
            if (static_cast<double>(errors) / blocks_per_point <= target_bler) {
                found = snr;
                break;
            }
        }
        thresholds.push_back(found);
    }
    return thresholds;
}

}  // namespace hdasc
