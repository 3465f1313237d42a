#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace hdasc {

// Every knob of the system, settable through a key = value config file and
// overridable from the CLI. Defaults follow the shipped experiment setup.
struct RunConfig {
    // reproducibility
    uint64_t seed = 1;

    // data
    int image_size = 64;
    int dataset_size = 48;   // synthetic textures when data_dir is empty
    int eval_images = 16;    // held-out evaluation set size
    std::string data_dir;

    // training
    int batch_size = 8;
    int epochs_stage1 = 30;
    int epochs_stage2 = 30;
    int epochs_stage3 = 10;
    double learning_rate = 2e-4;
    double lambda_f = 0.1;
    double lambda_z = 0.1;
    double lambda_r = 0.0005;
    std::string channel = "awgn";
    double rician_r = 1.0;
    double train_snr_min = 0.0;
    double train_snr_max = 18.0;

    // architecture
    int hidden_channels = 24;
    int feature_channels = 16;
    int hyper_hidden = 24;
    int hyper_channels = 8;
    int analog_symbols = 1024;
    int analog_hidden = 384;
    int diffusion_steps = 50;
    int predictor_width = 256;
    int predictor_embed = 32;
    int predictor_frames = 256;
    int predictor_steps = 5000;
    int predictor_batch = 8;
    int onestep_steps = 5000;
    double denoiser_lr = 1e-3;
    int quant_support = 255;

    // physical layer
    int ldpc_max_iters = 20;
    double ldpc_norm_factor = 0.8;
    double llr_max = 20.0;
    bool max_log_demapper = false;
    std::string amc_thresholds = "0.75,3.5,5.5,9.5,11.5";
    std::string ldpc_dir;  // empty -> built-in data directory

    // losses
    bool loss_cd_squared = false;

    // inference and experiments
    std::string denoiser = "off";  // off | diff | onestep
    bool denoise_digital = false;  // ablation: denoise digital symbols pre-demap
    bool encrypt = false;
    std::string key_hex = "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";
    uint64_t nonce = 1;
    std::string eve_mode = "garbage";  // garbage | zero
    int trials = 1;
    std::string snr_list = "0,3,6,9,12,15,18";
    int da_budget_symbols = 2048;
    std::string checkpoint;
    std::string out;

    static RunConfig from_file(const std::string& path);
    void set(const std::string& key, const std::string& value);  // unknown key -> ConfigError
    std::string get(const std::string& key) const;
    std::string serialize() const;  // canonical key order, one per line
    void apply_text(const std::string& text);

    std::vector<double> snr_values() const;
    std::vector<double> amc_threshold_values() const;
    void validate() const;
};

std::vector<double> parse_double_list(const std::string& csv);

}  // namespace hdasc
