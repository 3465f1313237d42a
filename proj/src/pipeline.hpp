#pragma once

#include "channel.hpp"
#include "checkpoint.hpp"
#include "cipher.hpp"
#include "metrics.hpp"
#include "optimizer.hpp"

namespace hdasc {

struct TrainStats {
    std::vector<double> stage1_epoch_loss;
    std::vector<double> stage2_epoch_loss;
    std::vector<double> stage3_epoch_loss;
    std::vector<double> predictor_loss;
    std::vector<double> onestep_loss;
    // instrumented contract: the digital features reaching the training loss
    // differ from z_D only by the uniform proxy, so the largest observed
    // perturbation stays below 1/2 (channel noise would exceed it)
    double max_digital_perturbation = 0.0;
    double stage3_rate_bpp_first = 0.0;
    double stage3_rate_bpp_last = 0.0;
    bool diverged = false;
};

std::vector<ImageSample> prepare_dataset(const RunConfig& cfg);
std::vector<ImageSample> prepare_eval_set(const RunConfig& cfg);

// Three training stages plus denoiser fitting. Each stage restores the last
// epoch-boundary state and stops if the loss leaves the finite range.
void train_stage1(Model& model, const std::vector<ImageSample>& dataset, TrainStats* stats);
void train_stage2(Model& model, const std::vector<ImageSample>& dataset, TrainStats* stats);
void train_stage3(Model& model, const std::vector<ImageSample>& dataset, TrainStats* stats);
void train_denoisers(Model& model, TrainStats* stats);
Model train_all(const RunConfig& cfg, TrainStats* stats = nullptr);

// Clean analog frames for the denoiser corpus: images through the trained
// encoder, allocation (round quantizer) and analog encoder.
std::vector<Tensor> collect_analog_frames(Model& model, const std::vector<ImageSample>& images);

enum class DenoiserMode { Off, Diffusion, OneStep };
DenoiserMode denoiser_mode_from_string(const std::string& s);
std::string denoiser_mode_name(DenoiserMode m);

struct InferOptions {
    ChannelKind channel = ChannelKind::AWGN;
    double rician_r = 1.0;
    double snr_db = 10.0;
    DenoiserMode denoiser = DenoiserMode::Off;
    bool denoise_digital = false;  // ablation: run the denoiser pre-demapping too
    bool encrypt = false;
    const KeystreamCipher* tx_cipher = nullptr;
    const KeystreamCipher* rx_cipher = nullptr;  // may hold the wrong key
    bool eve_zero_digital = false;  // analog-only eavesdropper model
    bool noiseless = false;
    bool disable_quantization = false;
    int pad_digital_symbols = 0;  // with data symbols below this, pad the frame
    uint64_t seed = 0;
};

// Out-of-band control information for one digital frame (bit-exact layout:
// u16 block count, u16 padding bits, u8 AMC index, little-endian).
struct PhyFrameHeader {
    uint16_t block_count = 0;
    uint16_t padding_bits = 0;
    uint8_t amc_index = 0;

    std::array<uint8_t, 5> serialize() const;
    static PhyFrameHeader parse(const std::array<uint8_t, 5>& bytes);
};

struct InferResult {
    ImageSample reconstructed;
    MetricsRecord metrics;
    bool dropped = false;          // deep fade
    bool framing_failed = false;   // entropy header corrupt: coarse part zeroed
    bool ldpc_all_converged = true;
    PhyFrameHeader phy_header;
    size_t analog_symbols = 0;
    size_t digital_symbols = 0;      // includes budget padding
    size_t digital_data_symbols = 0;
    size_t stream_bits = 0;          // serialized bitstream, header + payload
    std::string quantizer;  // "round" or "disabled"; never the training proxy
    std::vector<int32_t> sent_symbols;
    std::vector<int32_t> received_symbols;
    Tensor features;       // z at the transmitter
    Tensor features_hat;   // fused features at the receiver
    double sigma_eff2 = 0.0;
};

// Immutable per-model inference state shared across parallel frames.
class InferContext {
public:
    InferContext(const Model& model, const RunConfig& cfg);

    const LdpcCode& code_for(const AmcEntry& entry) const;
    const AmcLadder& amc() const { return amc_; }
    const CodingTable& table() const { return table_; }
    const DiffusionSchedule& schedule() const { return schedule_; }
    int ldpc_max_iters = 20;
    double ldpc_norm_factor = 0.8;
    double llr_max = 20.0;
    bool max_log = false;
    int quant_support = 255;

private:
    LdpcCode rate12_, rate34_;
    AmcLadder amc_;
    CodingTable table_;
    DiffusionSchedule schedule_;
};

InferResult infer(const Model& model, const InferContext& ctx, const ImageSample& image,
                  const InferOptions& opts);

}  // namespace hdasc
