#pragma once

#include "pipeline.hpp"

namespace hdasc {

struct SweepPoint {
    MetricsRecord row;                 // averages exclude dropped frames
    double psnr_including_dropped = 0.0;
    int frames_total = 0;
};

struct SweepResult {
    std::string header;
    std::vector<SweepPoint> points;

    std::string csv() const;
    void write(const std::string& path) const;
};

// Per-SNR averages over eval images x trials; seeds derive from
// (seed, snr index, trial, image). Requires a trained checkpoint.
SweepResult run_snr_sweep(const Model& model, const RunConfig& cfg,
                          const std::vector<double>& snrs, int trials,
                          const std::vector<ImageSample>& eval_set);

// Fixed total symbol budget across configured DA ratios, one trained model
// per ratio. The digital segment pads up to (budget - L_A) symbols.
SweepResult run_da_ratio_sweep(std::vector<Model*> models, const RunConfig& cfg, double snr_db,
                               int trials, const std::vector<ImageSample>& eval_set);

// Metrics against bandwidth ratio at a fixed SNR, one model per ratio point.
SweepResult run_bandwidth_sweep(std::vector<Model*> models, const RunConfig& cfg, double snr_db,
                                int trials, const std::vector<ImageSample>& eval_set);

struct SecurityPoint {
    double snr_db = 0.0;
    std::string channel;
    double da_ratio = 0.0;
    std::string eve_mode;
    double legit_psnr_db = 0.0;
    double eve_psnr_db = 0.0;
    double psnr_gap_db = 0.0;
    double legit_ms_ssim = 0.0;
    double eve_ms_ssim = 0.0;
    double bits_per_pixel = 0.0;
    int frames_dropped = 0;
};

struct SecurityResult {
    std::vector<SecurityPoint> points;
    static std::string csv_header();
    std::string csv() const;
    void write(const std::string& path) const;
};

// Legitimate receiver (correct key) against an eavesdropper without it; the
// eavesdropper either decodes keystream garbage or, in "zero" mode, drops the
// digital contribution entirely.
SecurityResult run_security_eval(const Model& model, const RunConfig& cfg, double snr_db,
                                 int trials, const std::vector<ImageSample>& eval_set);

void require_trained(const Model& model);

}  // namespace hdasc
