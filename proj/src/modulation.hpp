#pragma once

#include <complex>
#include <string>
#include <vector>

#include "errors.hpp"
#include "ldpc.hpp"
#include "rng.hpp"

namespace hdasc {

using cplx = std::complex<double>;

enum class Modulation { BPSK, QPSK, QAM16 };

int bits_per_symbol(Modulation m);
std::string modulation_name(Modulation m);

// Gray-mapped unit-average-power constellation, indexed by the packed bit
// pattern (first bit is the MSB).
std::vector<cplx> constellation(Modulation m);

std::vector<cplx> modulate(const std::vector<uint8_t>& bits, Modulation m);

// Exact (log-sum-exp) or max-log bit LLRs, positive for bit 0, clipped to
// +/- llr_max. noise_var is the complex-symbol noise variance.
std::vector<double> demodulate_soft(const std::vector<cplx>& symbols, Modulation m,
                                    double noise_var, bool max_log = false,
                                    double llr_max = 20.0);

struct AmcEntry {
    double code_rate;       // 1/2 or 3/4
    Modulation modulation;
    double efficiency;      // info bits per symbol = rate * log2(M)
    double threshold_db;    // lowest SNR at which BLER <= 1e-2 (calibrated)
};

// Modulation-and-coding ladder in increasing efficiency order.
class AmcLadder {
public:
    // Thresholds default to the values calibrated on AWGN (see
    // calibrate_amc_thresholds and config key amc_thresholds).
    explicit AmcLadder(std::vector<double> thresholds = default_thresholds());

    static std::vector<double> default_thresholds();

    // Highest-efficiency entry whose threshold <= snr; the most robust entry
    // below the bottom of the ladder.
    const AmcEntry& select(double snr_db) const;
    int select_index(double snr_db) const;

    const std::vector<AmcEntry>& entries() const { return entries_; }
    const AmcEntry& entry(int idx) const { return entries_.at(idx); }

private:
    std::vector<AmcEntry> entries_;
};

// Smallest SNR on the given grid where the simulated AWGN block error rate
// drops to `target_bler` or below, one value per ladder entry.
std::vector<double> calibrate_amc_thresholds(const LdpcCode& rate12, const LdpcCode& rate34,
                                             double snr_min_db, double snr_max_db,
                                             double step_db, int blocks_per_point,
                                             double target_bler, uint64_t seed);

}  // namespace hdasc
