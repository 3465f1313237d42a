#include "pipeline.hpp"

#include <cmath>
#include <cstdio>

namespace hdasc {

std::vector<ImageSample> prepare_dataset(const RunConfig& cfg) {
    if (!cfg.data_dir.empty()) return load_dataset(cfg.data_dir, cfg.image_size);
    return generate_textures(cfg.dataset_size, cfg.image_size, derive_seed(cfg.seed, 0xda7a));
}

std::vector<ImageSample> prepare_eval_set(const RunConfig& cfg) {
    return generate_textures(cfg.eval_images, cfg.image_size, derive_seed(cfg.seed, 0xe7a1));
}

namespace {

std::vector<Tensor> snapshot_params(const ParamList& params) {
    std::vector<Tensor> copy;
    copy.reserve(params.size());
    for (const auto& p : params) copy.push_back(p.var.value());
    return copy;
}

void restore_params(ParamList& params, const std::vector<Tensor>& copy) {
    for (size_t i = 0; i < params.size(); ++i) params[i].var.value_mut() = copy[i];
}

std::vector<size_t> epoch_order(size_t n, Rng& rng) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    for (size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.next_below(i)]);
    return idx;
}

// Runs one optimization epoch over shuffled batches; returns the mean batch
// loss or NaN if anything non-finite appeared.
template <class BatchLoss>
double run_epoch(const std::vector<ImageSample>& dataset, int batch_size, Rng& order_rng,
                 Adam& opt, BatchLoss&& batch_loss) {
    const std::vector<size_t> order = epoch_order(dataset.size(), order_rng);
    double total = 0.0;
    int batches = 0;
    for (size_t start = 0; start < order.size(); start += batch_size) {
        const size_t end = std::min(order.size(), start + batch_size);
        opt.zero_grad();
        Var loss = batch_loss(order, start, end);
        if (!loss.value().all_finite()) return std::nan("");
        backward(loss);
        opt.step();
        total += loss.value()[0];
        ++batches;
    }
    return batches ? total / batches : 0.0;
}

}  // namespace

void train_stage1(Model& model, const std::vector<ImageSample>& dataset, TrainStats* stats) {
    if (dataset.empty()) throw ConfigError("train: empty dataset");
    ParamList params = model.group("alpha_t");
    {
        ParamList dec = model.group("alpha_r");
        params.insert(params.end(), dec.begin(), dec.end());
    }
    AdamConfig acfg;
    acfg.lr = model.cfg.learning_rate;
    Adam opt(acfg);
    opt.attach(params);
    Rng order_rng(derive_seed(model.cfg.seed, 0x51));

    for (int epoch = 0; epoch < model.cfg.epochs_stage1; ++epoch) {
        std::vector<Tensor> good = snapshot_params(params);
        double mean_loss;
        try {
            mean_loss = run_epoch(dataset, model.cfg.batch_size, order_rng, opt,
                                  [&](const std::vector<size_t>& order, size_t s, size_t e) {
                                      Var total;
                                      for (size_t i = s; i < e; ++i) {
                                          Var img = Var::constant(dataset[order[i]].pixels);
                                          Var z = model.encoder.forward(img);
                                          Var rec = model.decoder.forward(z);
                                          Var l = loss_semantic_distortion(img, rec,
                                                                           model.cfg.lambda_f);
                                          total = total.defined() ? add(total, l) : l;
                                      }
                                      return scale(total, 1.0 / static_cast<double>(e - s));
                                  });
        } catch (const TrainingDivergenceError&) {
            mean_loss = std::nan("");
        }
        if (std::isnan(mean_loss)) {
            restore_params(params, good);
            if (stats) stats->diverged = true;
            std::fprintf(stderr, "stage1: divergence at epoch %d, restored last good state\n",
                         epoch);
            break;
        }
        if (stats) stats->stage1_epoch_loss.push_back(mean_loss);
    }
    model.semantic_trained = true;
}

void train_stage2(Model& model, const std::vector<ImageSample>& dataset, TrainStats* stats) {
    if (dataset.empty()) throw ConfigError("train: empty dataset");
    ParamList params;
    for (const char* g : {"beta_t", "beta_r", "theta_t", "theta_r", "psi"}) {
        ParamList pl = model.group(g);
        params.insert(params.end(), pl.begin(), pl.end());
    }
    AdamConfig acfg;
    acfg.lr = model.cfg.learning_rate;
    Adam opt(acfg);
    opt.attach(params);

    // semantic codec frozen: features precomputed once
    std::vector<Tensor> features;
    features.reserve(dataset.size());
    for (const auto& img : dataset) features.push_back(model.encoder.forward(img.pixels));

    const ChannelKind kind = channel_kind_from_string(model.cfg.channel);
    Rng order_rng(derive_seed(model.cfg.seed, 0x52));
    Rng chan_rng(derive_seed(model.cfg.seed, 0x52c));
    Rng quant_rng(derive_seed(model.cfg.seed, 0x52d));
    Rng snr_rng(derive_seed(model.cfg.seed, 0x52e));
    const Shape zshape = features.front().shape();

    for (int epoch = 0; epoch < model.cfg.epochs_stage2; ++epoch) {
        std::vector<Tensor> good = snapshot_params(params);
        double mean_loss;
        try {
            mean_loss = run_epoch(
                dataset, model.cfg.batch_size, order_rng, opt,
                [&](const std::vector<size_t>& order, size_t s, size_t e) {
                    const double snr =
                        snr_rng.uniform(model.cfg.train_snr_min, model.cfg.train_snr_max);
                    Var total;
                    size_t used = 0;
                    for (size_t i = s; i < e; ++i) {
                        Var z = Var::constant(features[order[i]]);
                        auto alloc = allocate(z, model.hyper, QuantMode::TrainProxy, &quant_rng);
                        // digital part is transported error-free while training
                        if (stats)
                            for (size_t d = 0; d < alloc.z_d.value().numel(); ++d)
                                stats->max_digital_perturbation = std::max(
                                    stats->max_digital_perturbation,
                                    std::abs(alloc.z_tilde_d.value()[d] - alloc.z_d.value()[d]));
                        Var frame = model.analog.encode(alloc.z_a);
                        ChannelRealization real = sample_channel(kind, chan_rng, model.cfg.rician_r);
                        if (std::norm(real.h) < 1e-6) continue;  // skip deep training fades
                        real.sigma_n2 = std::pow(10.0, -snr / 10.0);
                        Tensor noise = complex_to_interleaved(
                            ls_effective_noise(real, model.cfg.analog_symbols, chan_rng));
                        Var x_hat = add(frame, Var::constant(noise));
                        Var z_a_hat = reshape(model.analog.decode(x_hat), zshape);
                        Var z_hat = add(alloc.z_tilde, z_a_hat);
                        Var cd = loss_channel_distortion(z, z_hat, alloc.z_tilde,
                                                         model.cfg.lambda_z,
                                                         model.cfg.loss_cd_squared);
                        Var rate = model.density.rate_loss(
                            reshape(alloc.z_tilde_d,
                                    Shape{static_cast<int>(alloc.z_tilde_d.value().numel())}));
                        Var l = add(cd, scale(rate, model.cfg.lambda_r));
                        total = total.defined() ? add(total, l) : l;
                        ++used;
                    }
                    if (!total.defined()) return Var::param(Tensor(Shape{1}, {0.0}));
                    return scale(total, 1.0 / static_cast<double>(used));
                });
        } catch (const TrainingDivergenceError&) {
            mean_loss = std::nan("");
        }
        if (std::isnan(mean_loss)) {
            restore_params(params, good);
            if (stats) stats->diverged = true;
            std::fprintf(stderr, "stage2: divergence at epoch %d, restored last good state\n",
                         epoch);
            break;
        }
        if (stats) stats->stage2_epoch_loss.push_back(mean_loss);
    }
    model.transceiver_trained = true;
}

void train_stage3(Model& model, const std::vector<ImageSample>& dataset, TrainStats* stats) {
    if (dataset.empty()) throw ConfigError("train: empty dataset");
    ParamList params = model.all_params();
    // denoiser groups train separately, afterwards
    ParamList trainable;
    for (auto& p : params)
        if (p.name.rfind("omega", 0) != 0) trainable.push_back(p);

    AdamConfig acfg;
    acfg.lr = model.cfg.learning_rate;
    Adam opt(acfg);
    opt.attach(trainable);

    const ChannelKind kind = channel_kind_from_string(model.cfg.channel);
    Rng order_rng(derive_seed(model.cfg.seed, 0x53));
    Rng chan_rng(derive_seed(model.cfg.seed, 0x53c));
    Rng quant_rng(derive_seed(model.cfg.seed, 0x53d));
    Rng snr_rng(derive_seed(model.cfg.seed, 0x53e));

    const double nats_to_bpp = static_cast<double>(model.hda_cfg().digital_dim()) /
                               (std::log(2.0) * model.cfg.image_size * model.cfg.image_size);

    for (int epoch = 0; epoch < model.cfg.epochs_stage3; ++epoch) {
        std::vector<Tensor> good = snapshot_params(trainable);
        double epoch_rate_nats = 0.0;
        size_t rate_samples = 0;
        double mean_loss;
        try {
            mean_loss = run_epoch(
                dataset, model.cfg.batch_size, order_rng, opt,
                [&](const std::vector<size_t>& order, size_t s, size_t e) {
                    const double snr =
                        snr_rng.uniform(model.cfg.train_snr_min, model.cfg.train_snr_max);
                    Var total;
                    size_t used = 0;
                    for (size_t i = s; i < e; ++i) {
                        Var img = Var::constant(dataset[order[i]].pixels);
                        Var z = model.encoder.forward(img);
                        auto alloc = allocate(z, model.hyper, QuantMode::TrainProxy, &quant_rng);
                        if (stats)
                            for (size_t d = 0; d < alloc.z_d.value().numel(); ++d)
                                stats->max_digital_perturbation = std::max(
                                    stats->max_digital_perturbation,
                                    std::abs(alloc.z_tilde_d.value()[d] - alloc.z_d.value()[d]));
                        Var frame = model.analog.encode(alloc.z_a);
                        ChannelRealization real = sample_channel(kind, chan_rng, model.cfg.rician_r);
                        if (std::norm(real.h) < 1e-6) continue;
                        real.sigma_n2 = std::pow(10.0, -snr / 10.0);
                        Tensor noise = complex_to_interleaved(
                            ls_effective_noise(real, model.cfg.analog_symbols, chan_rng));
                        Var x_hat = add(frame, Var::constant(noise));
                        Var z_a_hat =
                            reshape(model.analog.decode(x_hat), z.value().shape());
                        Var z_hat = add(alloc.z_tilde, z_a_hat);
                        Var rec = model.decoder.forward(z_hat);
                        Var sd = loss_semantic_distortion(img, rec, model.cfg.lambda_f);
                        Var rate = model.density.rate_loss(
                            reshape(alloc.z_tilde_d,
                                    Shape{static_cast<int>(alloc.z_tilde_d.value().numel())}));
                        epoch_rate_nats += rate.value()[0];
                        ++rate_samples;
                        Var l = add(sd, scale(rate, model.cfg.lambda_r));
                        total = total.defined() ? add(total, l) : l;
                        ++used;
                    }
                    if (!total.defined()) return Var::param(Tensor(Shape{1}, {0.0}));
                    return scale(total, 1.0 / static_cast<double>(used));
                });
        } catch (const TrainingDivergenceError&) {
            mean_loss = std::nan("");
        }
        if (std::isnan(mean_loss)) {
            restore_params(trainable, good);
            if (stats) stats->diverged = true;
            std::fprintf(stderr, "stage3: divergence at epoch %d, restored last good state\n",
                         epoch);
            break;
        }
        if (stats) {
            stats->stage3_epoch_loss.push_back(mean_loss);
            const double bpp = rate_samples ? epoch_rate_nats / rate_samples * nats_to_bpp : 0.0;
            if (epoch == 0) stats->stage3_rate_bpp_first = bpp;
            stats->stage3_rate_bpp_last = bpp;
        }
    }
}

std::vector<Tensor> collect_analog_frames(Model& model, const std::vector<ImageSample>& images) {
    std::vector<Tensor> frames;
    frames.reserve(images.size());
    for (const auto& img : images) {
        Tensor z = model.encoder.forward(img.pixels);
        Tensor z_d = model.hyper.encode(z);
        Tensor z_tilde_d = dequantize(quantize(z_d, model.cfg.quant_support), z_d.shape());
        Tensor coarse = model.hyper.decode(z_tilde_d);
        Tensor z_a = sub(z, coarse);
        frames.push_back(model.analog.encode(z_a));
    }
    return frames;
}

void train_denoisers(Model& model, TrainStats* stats) {
    const DiffusionSchedule sched = build_schedule(model.cfg.diffusion_steps);
    std::vector<ImageSample> images = generate_textures(
        model.cfg.predictor_frames, model.cfg.image_size, derive_seed(model.cfg.seed, 0xdf));
    std::vector<Tensor> frames = collect_analog_frames(model, images);

    // Starting steps reachable from the configured SNR range (plus margin):
    // reverse trajectories only ever begin there, so the sampler-visited
    // states the predictor must handle live below this cap.
    const double v_lo = std::pow(10.0, -model.cfg.train_snr_min / 10.0) / 2.0;
    const int t_cap = std::min(sched.steps, map_noise_to_step(v_lo, sched) + 4);

    {
        AdamConfig acfg;
        acfg.lr = model.cfg.denoiser_lr;
        Adam opt(acfg);
        ParamList params = model.group("omega");
        opt.attach(params);
        Rng rng(derive_seed(model.cfg.seed, 0xd1));
        for (int step = 0; step < model.cfg.predictor_steps; ++step) {
            opt.zero_grad();
            Var total;
            int used = 0;
            for (int b = 0; b < model.cfg.predictor_batch; ++b) {
                const Tensor& x0 = frames[rng.next_below(frames.size())];
                Tensor x;
                int t_fit;
                if (rng.uniform() < 0.5) {
                    // forward-process pair; uniform steps keep every table
                    // entry trained
                    t_fit = 1 + static_cast<int>(rng.next_below(sched.steps));
                    Tensor eps = Tensor::normal(x0.shape(), rng);
                    x = forward_sample(x0, t_fit, eps, sched);
                } else {
                    // sampler-visited state: start on the marginal at an
                    // operating-range step and roll partway down with the
                    // current predictor
                    const int t_start = 1 + static_cast<int>(rng.next_below(t_cap));
                    Tensor eps = Tensor::normal(x0.shape(), rng);
                    x = forward_sample(x0, t_start, eps, sched);
                    t_fit = 1 + static_cast<int>(rng.next_below(t_start));
                    for (int t = t_start; t > t_fit; --t) {
                        Tensor eps_hat = model.predictor.predict(x, t);
                        Tensor nx(x.shape());
                        const double g = sched.gamma[t], gb = sched.gamma_bar[t];
                        for (size_t i = 0; i < x.numel(); ++i)
                            nx[i] = (x[i] - (g / gb) * eps_hat[i]) / std::sqrt(1.0 - g);
                        x = nx;
                    }
                }
                // the state's noise content under the marginal coefficients is
                // exactly what the reverse update needs removed
                Tensor target(x.shape());
                for (size_t i = 0; i < x.numel(); ++i)
                    target[i] =
                        (x[i] - sched.alpha_bar[t_fit] * x0[i]) / sched.gamma_bar[t_fit];
                Var pred = model.predictor.predict(Var::constant(x), t_fit);
                Var d = sub(pred, Var::constant(target));
                Var l = sum(mul(d, d));
                total = total.defined() ? add(total, l) : l;
                ++used;
            }
            if (!used) continue;
            Var loss = scale(total, 1.0 / used);
            backward(loss);
            opt.step();
            if (stats && step % 100 == 0) stats->predictor_loss.push_back(loss.value()[0]);
        }
        model.predictor_trained = model.cfg.predictor_steps > 0;
    }

    {
        // blind baseline: residual regression across the whole schedule
        AdamConfig acfg;
        acfg.lr = model.cfg.denoiser_lr;
        Adam opt(acfg);
        ParamList params = model.group("omega_onestep");
        opt.attach(params);
        Rng rng(derive_seed(model.cfg.seed, 0xd2));
        for (int step = 0; step < model.cfg.onestep_steps; ++step) {
            opt.zero_grad();
            Var total;
            for (int b = 0; b < model.cfg.predictor_batch; ++b) {
                const Tensor& x0 = frames[rng.next_below(frames.size())];
                const int t = 1 + static_cast<int>(rng.next_below(sched.steps));
                Tensor eps = Tensor::normal(x0.shape(), rng);
                Tensor xt = forward_sample(x0, t, eps, sched);
                Tensor target = sub(xt, x0);  // residual the blind pass must remove
                Var pred = model.onestep.predict_residual(Var::constant(xt));
                Var d = sub(pred, Var::constant(target));
                Var l = sum(mul(d, d));
                total = total.defined() ? add(total, l) : l;
            }
            Var loss = scale(total, 1.0 / model.cfg.predictor_batch);
            backward(loss);
            opt.step();
            if (stats && step % 100 == 0) stats->onestep_loss.push_back(loss.value()[0]);
        }
        model.onestep_trained = model.cfg.onestep_steps > 0;
    }
}

Model train_all(const RunConfig& cfg, TrainStats* stats) {
    Model model = Model::init(cfg);
    std::vector<ImageSample> dataset = prepare_dataset(cfg);
    train_stage1(model, dataset, stats);
    train_stage2(model, dataset, stats);
    train_stage3(model, dataset, stats);
    train_denoisers(model, stats);
    return model;
}

// ------------------------------------------------------------- inference ---

DenoiserMode denoiser_mode_from_string(const std::string& s) {
    if (s == "off") return DenoiserMode::Off;
    if (s == "diff") return DenoiserMode::Diffusion;
    if (s == "onestep") return DenoiserMode::OneStep;
    throw ConfigError("unknown denoiser mode: " + s);
}

std::string denoiser_mode_name(DenoiserMode m) {
    switch (m) {
        case DenoiserMode::Off: return "off";
        case DenoiserMode::Diffusion: return "diff";
        case DenoiserMode::OneStep: return "onestep";
    }
    return "?";
}

std::array<uint8_t, 5> PhyFrameHeader::serialize() const {
    return {static_cast<uint8_t>(block_count), static_cast<uint8_t>(block_count >> 8),
            static_cast<uint8_t>(padding_bits), static_cast<uint8_t>(padding_bits >> 8),
            amc_index};
}

PhyFrameHeader PhyFrameHeader::parse(const std::array<uint8_t, 5>& bytes) {
    PhyFrameHeader h;
    h.block_count = static_cast<uint16_t>(bytes[0] | (bytes[1] << 8));
    h.padding_bits = static_cast<uint16_t>(bytes[2] | (bytes[3] << 8));
    h.amc_index = bytes[4];
    return h;
}

InferContext::InferContext(const Model& model, const RunConfig& cfg)
    : rate12_(LdpcCode::load((cfg.ldpc_dir.empty() ? default_data_dir() : cfg.ldpc_dir) +
                             "/ldpc_672_r12.txt")),
      rate34_(LdpcCode::load((cfg.ldpc_dir.empty() ? default_data_dir() : cfg.ldpc_dir) +
                             "/ldpc_672_r34.txt")),
      amc_(cfg.amc_threshold_values()),
      table_(model.density.freeze(cfg.quant_support)),
      schedule_(build_schedule(cfg.diffusion_steps)) {
    ldpc_max_iters = cfg.ldpc_max_iters;
    ldpc_norm_factor = cfg.ldpc_norm_factor;
    llr_max = cfg.llr_max;
    max_log = cfg.max_log_demapper;
    quant_support = cfg.quant_support;
}

const LdpcCode& InferContext::code_for(const AmcEntry& entry) const {
    return entry.code_rate < 0.6 ? rate12_ : rate34_;
}

namespace {

std::vector<uint8_t> bytes_to_bits(const std::vector<uint8_t>& bytes) {
    std::vector<uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (uint8_t b : bytes)
        for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1);
    return bits;
}

std::vector<uint8_t> bits_to_bytes(const std::vector<uint8_t>& bits) {
    std::vector<uint8_t> bytes(bits.size() / 8, 0);
    for (size_t i = 0; i < bytes.size() * 8; ++i)
        bytes[i / 8] = static_cast<uint8_t>((bytes[i / 8] << 1) | (bits[i] & 1));
    return bytes;
}

std::vector<std::vector<int32_t>> group_symbols(const std::vector<int32_t>& flat, int channels) {
    const size_t per = flat.size() / channels;
    std::vector<std::vector<int32_t>> out(channels);
    for (int c = 0; c < channels; ++c)
        out[c].assign(flat.begin() + static_cast<long>(per * c),
                      flat.begin() + static_cast<long>(per * (c + 1)));
    return out;
}

}  // namespace

InferResult infer(const Model& model, const InferContext& ctx, const ImageSample& image,
                  const InferOptions& opts) {
    InferResult res;
    Rng rng(derive_seed(opts.seed, 0x1f));
    const HdaConfig hda = model.hda_cfg();

    // --- transmitter ---
    Tensor z = model.encoder.forward(image.pixels);
    res.features = z;

    Tensor z_d = model.hyper.encode(z);
    size_t saturated = 0;
    std::vector<int32_t> symbols;
    Tensor z_tilde_d;
    if (opts.disable_quantization) {
        z_tilde_d = z_d;
        symbols = quantize(z_d, ctx.quant_support, &saturated);  // reported, not transported
        res.quantizer = "disabled";
    } else {
        symbols = quantize(z_d, ctx.quant_support, &saturated);
        z_tilde_d = dequantize(symbols, z_d.shape());
        res.quantizer = "round";
    }
    if (saturated)
        std::fprintf(stderr, "warning: %zu digital features saturated at +/-%d\n", saturated,
                     ctx.quant_support);
    res.sent_symbols = symbols;
    Tensor coarse_tx = model.hyper.decode(z_tilde_d);
    Tensor z_a = sub(z, coarse_tx);

    // digital branch: entropy coding, optional encryption, FEC, modulation
    Bitstream bs = range_encode(group_symbols(symbols, hda.hyper_channels), ctx.table());
    if (opts.encrypt) {
        if (!opts.tx_cipher) throw ConfigError("encryption requested without a key");
        bs = encrypt_bits(std::move(bs), *opts.tx_cipher);
    }
    const std::vector<uint8_t> stream_bytes = bs.serialize();
    res.stream_bits = stream_bytes.size() * 8;
    std::vector<uint8_t> bits = bytes_to_bits(stream_bytes);

    const int amc_index = ctx.amc().select_index(opts.snr_db);
    const AmcEntry& entry = ctx.amc().entry(amc_index);
    const LdpcCode& code = ctx.code_for(entry);
    const int k = code.k();
    const int blocks = static_cast<int>((bits.size() + k - 1) / k);
    const int padding = static_cast<int>(blocks * k - bits.size());
    bits.resize(static_cast<size_t>(blocks) * k, 0);
    res.phy_header = {static_cast<uint16_t>(blocks), static_cast<uint16_t>(padding),
                      static_cast<uint8_t>(amc_index)};

    std::vector<uint8_t> coded;
    coded.reserve(static_cast<size_t>(blocks) * code.n());
    for (int b = 0; b < blocks; ++b) {
        std::vector<uint8_t> info(bits.begin() + static_cast<long>(b) * k,
                                  bits.begin() + static_cast<long>(b + 1) * k);
        std::vector<uint8_t> cw = code.encode(info);
        coded.insert(coded.end(), cw.begin(), cw.end());
    }
    std::vector<cplx> x_d = modulate(coded, entry.modulation);
    res.digital_data_symbols = x_d.size();
    if (opts.pad_digital_symbols > 0 &&
        x_d.size() < static_cast<size_t>(opts.pad_digital_symbols)) {
        // budget filler: random-bit symbols keep the frame at unit power
        Rng fill_rng(derive_seed(opts.seed, 0xf177));
        const int bps = bits_per_symbol(entry.modulation);
        std::vector<uint8_t> filler((opts.pad_digital_symbols - x_d.size()) * bps);
        for (auto& b : filler) b = static_cast<uint8_t>(fill_rng.next_below(2));
        std::vector<cplx> pad = modulate(filler, entry.modulation);
        x_d.insert(x_d.end(), pad.begin(), pad.end());
    }
    res.digital_symbols = x_d.size();

    // analog branch
    Tensor analog_frame = model.analog.encode(z_a);
    std::vector<cplx> x_a = interleaved_to_complex(analog_frame);
    res.analog_symbols = x_a.size();

    std::vector<cplx> x;
    x.reserve(x_a.size() + x_d.size());
    x.insert(x.end(), x_a.begin(), x_a.end());
    x.insert(x.end(), x_d.begin(), x_d.end());

    // --- channel ---
    ChannelRealization real = sample_channel(opts.channel, rng, opts.rician_r);
    std::vector<cplx> y = apply_channel(x, real, opts.snr_db, rng, opts.noiseless);

    const int img_h = image.height(), img_w = image.width();
    res.metrics.snr_db = opts.snr_db;
    res.metrics.channel = channel_kind_name(opts.channel);
    res.metrics.denoiser = denoiser_mode_name(opts.denoiser);
    res.metrics.encrypted = opts.encrypt;
    res.metrics.eta = bandwidth_ratio(x.size(), img_h, img_w);
    res.metrics.da_ratio = static_cast<double>(x_d.size()) / x_a.size();
    res.metrics.bits_per_pixel =
        static_cast<double>(res.stream_bits) / (static_cast<double>(img_h) * img_w);

    LsDetection det;
    try {
        det = ls_detect(y, real);
    } catch (const DeepFadeError&) {
        res.dropped = true;
        res.metrics.frames_dropped = 1;
        res.reconstructed = ImageSample{Tensor::full(image.pixels.shape(), 0.5), image.source};
        res.metrics.psnr_db = compute_psnr(image.pixels, res.reconstructed.pixels);
        res.metrics.ms_ssim = compute_ms_ssim(image.pixels, res.reconstructed.pixels);
        return res;
    }
    res.sigma_eff2 = det.sigma_eff2;

    // --- analog receiver ---
    std::vector<cplx> xa_hat(det.x_hat.begin(), det.x_hat.begin() + static_cast<long>(x_a.size()));
    Tensor analog_in = complex_to_interleaved(xa_hat);
    const double noise_per_dim = det.sigma_eff2 / 2.0;
    switch (opts.denoiser) {
        case DenoiserMode::Off:
            break;
        case DenoiserMode::Diffusion: {
            Tensor scaled = rescale_detected(analog_in, noise_per_dim);
            analog_in = dynamic_sample(scaled, noise_per_dim, model.predictor, ctx.schedule(),
                                       model.predictor_trained);
            break;
        }
        case DenoiserMode::OneStep: {
            if (!model.onestep_trained) throw ConfigError("one-step baseline is not trained");
            Tensor scaled = rescale_detected(analog_in, noise_per_dim);
            analog_in = one_step_denoise(scaled, model.onestep);
            break;
        }
    }
    Tensor z_a_hat = model.analog.decode(analog_in).reshaped(z.shape());

    // --- digital receiver ---
    std::vector<cplx> xd_hat(det.x_hat.begin() + static_cast<long>(x_a.size()), det.x_hat.end());
    xd_hat.resize(res.digital_data_symbols);  // budget filler carries no data
    if (opts.denoise_digital && opts.denoiser == DenoiserMode::Diffusion &&
        model.predictor_trained) {
        // ablation path: run the analog-frame denoiser over digital symbols in
        // frame-sized chunks (zero-padded tail)
        const size_t chunk = static_cast<size_t>(hda.analog_symbols);
        for (size_t off = 0; off < xd_hat.size(); off += chunk) {
            const size_t n = std::min(chunk, xd_hat.size() - off);
            std::vector<cplx> piece(xd_hat.begin() + static_cast<long>(off),
                                    xd_hat.begin() + static_cast<long>(off + n));
            piece.resize(chunk, cplx(0.0, 0.0));
            Tensor t = rescale_detected(complex_to_interleaved(piece), noise_per_dim);
            Tensor d = dynamic_sample(t, noise_per_dim, model.predictor, ctx.schedule(), true);
            for (size_t i = 0; i < n; ++i) xd_hat[off + i] = {d[2 * i], d[2 * i + 1]};
        }
    }

    Tensor coarse_rx;
    bool have_digital = false;
    if (opts.disable_quantization) {
        // diagnostic mode: the digital features bypass the coded pipeline
        coarse_rx = model.hyper.decode(z_tilde_d);
        res.received_symbols = symbols;
        have_digital = true;
    } else if (!opts.eve_zero_digital) {
        std::vector<double> llrs = demodulate_soft(xd_hat, entry.modulation, det.sigma_eff2,
                                                   ctx.max_log, ctx.llr_max);
        std::vector<uint8_t> rx_bits;
        rx_bits.reserve(static_cast<size_t>(blocks) * k);
        for (int b = 0; b < blocks; ++b) {
            std::vector<double> block_llrs(llrs.begin() + static_cast<long>(b) * code.n(),
                                           llrs.begin() + static_cast<long>(b + 1) * code.n());
            auto dec = code.decode(block_llrs, ctx.ldpc_max_iters, ctx.ldpc_norm_factor);
            if (!dec.converged) res.ldpc_all_converged = false;  // best-effort bits still used
            rx_bits.insert(rx_bits.end(), dec.info.begin(), dec.info.end());
        }
        rx_bits.resize(rx_bits.size() - res.phy_header.padding_bits);
        try {
            Bitstream rx_bs = Bitstream::parse(bits_to_bytes(rx_bits));
            if (rx_bs.encrypted()) {
                if (opts.rx_cipher) rx_bs = decrypt_bits(std::move(rx_bs), *opts.rx_cipher);
                // without a key the payload stays scrambled and decodes to noise
            }
            if (static_cast<int>(rx_bs.counts.size()) != hda.hyper_channels ||
                rx_bs.total_symbols() != static_cast<size_t>(hda.digital_dim()))
                throw FramingError("symbol counts do not match the feature layout");
            auto rx_groups = range_decode(rx_bs, ctx.table());
            std::vector<int32_t> flat;
            flat.reserve(hda.digital_dim());
            for (auto& g : rx_groups) flat.insert(flat.end(), g.begin(), g.end());
            res.received_symbols = flat;
            Tensor z_d_hat = dequantize(flat, z_d.shape());
            coarse_rx = model.hyper.decode(z_d_hat);
            have_digital = true;
        } catch (const FramingError&) {
            res.framing_failed = true;
        }
    }
    if (!have_digital) coarse_rx = Tensor::zeros(z.shape());  // digital contribution zeroed

    Tensor z_hat = add(coarse_rx, z_a_hat);
    res.features_hat = z_hat;
    Tensor rec = model.decoder.forward(z_hat);
    res.reconstructed = ImageSample{rec, image.source};
    res.metrics.psnr_db = compute_psnr(image.pixels, rec);
    res.metrics.ms_ssim = compute_ms_ssim(image.pixels, rec);
    return res;
}

}  // namespace hdasc
