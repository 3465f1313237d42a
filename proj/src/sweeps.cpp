#include "sweeps.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace hdasc {

void require_trained(const Model& model) {
    if (!model.semantic_trained || !model.transceiver_trained)
        throw CheckpointError("checkpoint is not trained (run the training pipeline first)");
}

namespace {

// Deterministic parallel map: task i writes slot i, worker split is static.
template <class Fn>
void parallel_for(size_t count, Fn&& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = static_cast<unsigned>(std::min<size_t>(hw, count));
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (size_t i = w; i < count; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

struct FrameTask {
    size_t point;
    int trial;
    size_t image;
};

// Averages per point over every (trial, image) result.
SweepPoint reduce_point(const std::vector<InferResult>& results, const MetricsRecord& proto) {
    SweepPoint pt;
    pt.row = proto;
    double psnr = 0.0, ssim = 0.0, bpp = 0.0, eta = 0.0, da = 0.0, psnr_all = 0.0;
    int ok = 0, dropped = 0;
    for (const auto& r : results) {
        psnr_all += r.metrics.psnr_db;
        if (r.dropped) {
            ++dropped;
            continue;
        }
        psnr += r.metrics.psnr_db;
        ssim += r.metrics.ms_ssim;
        bpp += r.metrics.bits_per_pixel;
        eta += r.metrics.eta;
        da += r.metrics.da_ratio;
        ++ok;
    }
    pt.frames_total = static_cast<int>(results.size());
    pt.row.frames_dropped = dropped;
    pt.psnr_including_dropped = results.empty() ? 0.0 : psnr_all / results.size();
    if (ok) {
        pt.row.psnr_db = psnr / ok;
        pt.row.ms_ssim = ssim / ok;
        pt.row.bits_per_pixel = bpp / ok;
        pt.row.eta = eta / ok;
        pt.row.da_ratio = da / ok;
    }
    return pt;
}

}  // namespace

std::string SweepResult::csv() const {
    std::string out = header + "\n";
    for (const auto& p : points) out += p.row.csv_row() + "\n";
    return out;
}

void SweepResult::write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write CSV: " + path);
    f << csv();
}

SweepResult run_snr_sweep(const Model& model, const RunConfig& cfg,
                          const std::vector<double>& snrs, int trials,
                          const std::vector<ImageSample>& eval_set) {
    require_trained(model);
    SweepResult out;
    out.header = MetricsRecord::csv_header();
    if (trials <= 0 || snrs.empty() || eval_set.empty()) return out;

    InferContext ctx(model, cfg);
    const ChannelKind kind = channel_kind_from_string(cfg.channel);
    const DenoiserMode denoiser = denoiser_mode_from_string(cfg.denoiser);

    std::vector<FrameTask> tasks;
    for (size_t s = 0; s < snrs.size(); ++s)
        for (int t = 0; t < trials; ++t)
            for (size_t i = 0; i < eval_set.size(); ++i) tasks.push_back({s, t, i});
    std::vector<InferResult> results(tasks.size());

    parallel_for(tasks.size(), [&](size_t idx) {
        const FrameTask& task = tasks[idx];
        InferOptions opts;
        opts.channel = kind;
        opts.rician_r = cfg.rician_r;
        opts.snr_db = snrs[task.point];
        opts.denoiser = denoiser;
        opts.seed = derive_seed(cfg.seed, 0x55ee, (task.point << 20) | task.trial, task.image);
        results[idx] = infer(model, ctx, eval_set[task.image], opts);
    });

    for (size_t s = 0; s < snrs.size(); ++s) {
        std::vector<InferResult> slice;
        for (size_t idx = 0; idx < tasks.size(); ++idx)
            if (tasks[idx].point == s) slice.push_back(std::move(results[idx]));
        MetricsRecord proto;
        proto.snr_db = snrs[s];
        proto.channel = cfg.channel;
        proto.denoiser = cfg.denoiser;
        proto.encrypted = false;
        out.points.push_back(reduce_point(slice, proto));
    }
    return out;
}

namespace {

SweepResult run_model_sweep(std::vector<Model*> models, const RunConfig& cfg, double snr_db,
                            int trials, const std::vector<ImageSample>& eval_set,
                            bool enforce_budget) {
    SweepResult out;
    out.header = MetricsRecord::csv_header();
    if (trials <= 0 || models.empty() || eval_set.empty()) return out;

    for (Model* m : models) {
        require_trained(*m);
        if (enforce_budget && m->cfg.da_budget_symbols != cfg.da_budget_symbols)
            throw ConfigError("mismatched symbol budgets across DA-ratio checkpoints");
    }

    for (size_t mi = 0; mi < models.size(); ++mi) {
        Model& model = *models[mi];
        InferContext ctx(model, model.cfg);
        const ChannelKind kind = channel_kind_from_string(cfg.channel);
        const int pad = enforce_budget
                            ? std::max(0, cfg.da_budget_symbols - model.cfg.analog_symbols)
                            : 0;
        std::vector<InferResult> results(static_cast<size_t>(trials) * eval_set.size());
        parallel_for(results.size(), [&](size_t idx) {
            const int trial = static_cast<int>(idx / eval_set.size());
            const size_t image = idx % eval_set.size();
            InferOptions opts;
            opts.channel = kind;
            opts.rician_r = cfg.rician_r;
            opts.snr_db = snr_db;
            opts.denoiser = denoiser_mode_from_string(cfg.denoiser);
            opts.pad_digital_symbols = pad;
            opts.seed = derive_seed(cfg.seed, 0xda5e, (mi << 20) | trial, image);
            results[idx] = infer(model, ctx, eval_set[image], opts);
        });
        MetricsRecord proto;
        proto.snr_db = snr_db;
        proto.channel = cfg.channel;
        proto.denoiser = cfg.denoiser;
        out.points.push_back(reduce_point(results, proto));
    }
    return out;
}

}  // namespace

SweepResult run_da_ratio_sweep(std::vector<Model*> models, const RunConfig& cfg, double snr_db,
                               int trials, const std::vector<ImageSample>& eval_set) {
    return run_model_sweep(std::move(models), cfg, snr_db, trials, eval_set, true);
}

SweepResult run_bandwidth_sweep(std::vector<Model*> models, const RunConfig& cfg, double snr_db,
                                int trials, const std::vector<ImageSample>& eval_set) {
    return run_model_sweep(std::move(models), cfg, snr_db, trials, eval_set, false);
}

std::string SecurityResult::csv_header() {
    return "snr_db,channel,da_ratio,eve_mode,legit_psnr_db,eve_psnr_db,psnr_gap_db,"
           "legit_ms_ssim,eve_ms_ssim,bits_per_pixel,frames_dropped";
}

std::string SecurityResult::csv() const {
    std::string out = csv_header() + "\n";
    for (const auto& p : points) {
        char buf[320];
        std::snprintf(buf, sizeof(buf), "%.4f,%s,%.6f,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%d",
                      p.snr_db, p.channel.c_str(), p.da_ratio, p.eve_mode.c_str(),
                      p.legit_psnr_db, p.eve_psnr_db, p.psnr_gap_db, p.legit_ms_ssim,
                      p.eve_ms_ssim, p.bits_per_pixel, p.frames_dropped);
        out += buf;
        out += "\n";
    }
    return out;
}

void SecurityResult::write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write CSV: " + path);
    f << csv();
}

SecurityResult run_security_eval(const Model& model, const RunConfig& cfg, double snr_db,
                                 int trials, const std::vector<ImageSample>& eval_set) {
    require_trained(model);
    if (cfg.key_hex.empty()) throw ConfigError("security evaluation requires a key");
    SecurityResult out;
    if (trials <= 0 || eval_set.empty()) return out;

    InferContext ctx(model, cfg);
    const ChannelKind kind = channel_kind_from_string(cfg.channel);
    KeystreamCipher good = KeystreamCipher::from_hex(cfg.key_hex, cfg.nonce);
    // the eavesdropper guesses a different key
    std::string wrong_hex = cfg.key_hex;
    wrong_hex[0] = wrong_hex[0] == 'f' ? '0' : 'f';
    KeystreamCipher wrong = KeystreamCipher::from_hex(wrong_hex, cfg.nonce);
    const bool zero_mode = cfg.eve_mode == "zero";

    struct Pair {
        InferResult legit, eve;
    };
    std::vector<Pair> results(static_cast<size_t>(trials) * eval_set.size());
    parallel_for(results.size(), [&](size_t idx) {
        const int trial = static_cast<int>(idx / eval_set.size());
        const size_t image = idx % eval_set.size();
        InferOptions opts;
        opts.channel = kind;
        opts.rician_r = cfg.rician_r;
        opts.snr_db = snr_db;
        opts.denoiser = denoiser_mode_from_string(cfg.denoiser);
        opts.encrypt = true;
        opts.tx_cipher = &good;
        opts.seed = derive_seed(cfg.seed, 0x5ec0, trial, image);

        InferOptions legit = opts;
        legit.rx_cipher = &good;
        results[idx].legit = infer(model, ctx, eval_set[image], legit);

        InferOptions eve = opts;  // same seed: identical channel realization
        if (zero_mode)
            eve.eve_zero_digital = true;
        else
            eve.rx_cipher = &wrong;
        results[idx].eve = infer(model, ctx, eval_set[image], eve);
    });

    SecurityPoint pt;
    pt.snr_db = snr_db;
    pt.channel = cfg.channel;
    pt.eve_mode = cfg.eve_mode;
    double da = 0.0, bpp = 0.0;
    int ok = 0;
    for (const auto& pr : results) {
        if (pr.legit.dropped || pr.eve.dropped) {
            ++pt.frames_dropped;
            continue;
        }
        pt.legit_psnr_db += pr.legit.metrics.psnr_db;
        pt.eve_psnr_db += pr.eve.metrics.psnr_db;
        pt.legit_ms_ssim += pr.legit.metrics.ms_ssim;
        pt.eve_ms_ssim += pr.eve.metrics.ms_ssim;
        da += pr.legit.metrics.da_ratio;
        bpp += pr.legit.metrics.bits_per_pixel;
        ++ok;
    }
    if (ok) {
        pt.legit_psnr_db /= ok;
        pt.eve_psnr_db /= ok;
        pt.legit_ms_ssim /= ok;
        pt.eve_ms_ssim /= ok;
        pt.da_ratio = da / ok;
        pt.bits_per_pixel = bpp / ok;
        pt.psnr_gap_db = pt.legit_psnr_db - pt.eve_psnr_db;
    }
    out.points.push_back(pt);
    return out;
}

}  // namespace hdasc
