#include "hdasc.h"

#include <cstdio>
#include <cstring>

#include "sweeps.hpp"
#include "version.hpp"

using namespace hdasc;

struct hdasc_config {
    RunConfig cfg;
};

struct hdasc_model {
    Model model;
};

namespace {

thread_local std::string g_last_error;

hdasc_status fail(const std::exception& e, int code) {
    g_last_error = e.what();
    return static_cast<hdasc_status>(code);
}

template <class Fn>
hdasc_status guarded(Fn&& fn) {
    try {
        fn();
        return HDASC_OK;
    } catch (const Error& e) {
        return fail(e, e.code());
    } catch (const std::exception& e) {
        return fail(e, HDASC_ERR_RUNTIME);
    }
}

void fill_metrics(const MetricsRecord& m, hdasc_metrics* out) {
    if (!out) return;
    out->snr_db = m.snr_db;
    out->eta = m.eta;
    out->da_ratio = m.da_ratio;
    out->bits_per_pixel = m.bits_per_pixel;
    out->psnr_db = m.psnr_db;
    out->ms_ssim = m.ms_ssim;
    out->frames_dropped = m.frames_dropped;
    out->encrypted = m.encrypted ? 1 : 0;
    std::snprintf(out->channel, sizeof(out->channel), "%s", m.channel.c_str());
    std::snprintf(out->denoiser, sizeof(out->denoiser), "%s", m.denoiser.c_str());
}

double first_snr(const RunConfig& cfg) {
    auto v = cfg.snr_values();
    if (v.empty()) throw ConfigError("snr_list is empty");
    return v.front();
}

std::vector<Model> load_models(const char* const* paths, size_t count) {
    if (!paths || count == 0) throw ConfigError("no checkpoints given");
    std::vector<Model> models;
    models.reserve(count);
    for (size_t i = 0; i < count; ++i) models.push_back(load_checkpoint(paths[i]));
    return models;
}

}  // namespace

extern "C" {

const char* hdasc_version(void) { return kVersion; }

const char* hdasc_last_error(void) { return g_last_error.c_str(); }

hdasc_config* hdasc_config_create(void) { return new hdasc_config(); }

hdasc_status hdasc_config_load(hdasc_config* cfg, const char* path) {
    if (!cfg || !path) return HDASC_ERR_CONFIG;
    return guarded([&] { cfg->cfg = RunConfig::from_file(path); });
}

hdasc_status hdasc_config_set(hdasc_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return HDASC_ERR_CONFIG;
    return guarded([&] { cfg->cfg.set(key, value); });
}

hdasc_status hdasc_config_get(const hdasc_config* cfg, const char* key, char* buf, size_t cap) {
    if (!cfg || !key || !buf || cap == 0) return HDASC_ERR_CONFIG;
    return guarded([&] {
        const std::string v = cfg->cfg.get(key);
        std::snprintf(buf, cap, "%s", v.c_str());
    });
}

void hdasc_config_destroy(hdasc_config* cfg) { delete cfg; }

hdasc_status hdasc_train(const hdasc_config* cfg, const char* checkpoint_out) {
    if (!cfg || !checkpoint_out) return HDASC_ERR_CONFIG;
    return guarded([&] {
        cfg->cfg.validate();
        Model model = train_all(cfg->cfg);
        save_checkpoint(model, checkpoint_out);
    });
}

hdasc_status hdasc_model_load(const char* path, hdasc_model** out) {
    if (!path || !out) return HDASC_ERR_CONFIG;
    *out = nullptr;
    return guarded([&] { *out = new hdasc_model{load_checkpoint(path)}; });
}

void hdasc_model_destroy(hdasc_model* model) { delete model; }

hdasc_status hdasc_infer_image(const hdasc_model* model, const hdasc_config* cfg,
                               const char* image_in, const char* image_out,
                               hdasc_metrics* metrics_out) {
    if (!model || !cfg || !image_in) return HDASC_ERR_CONFIG;
    return guarded([&] {
        require_trained(model->model);
        const RunConfig& rc = cfg->cfg;
        ImageSample img = crop_resize(read_image(image_in), model->model.cfg.image_size);
        InferContext ctx(model->model, rc);
        InferOptions opts;
        opts.channel = channel_kind_from_string(rc.channel);
        opts.rician_r = rc.rician_r;
        opts.snr_db = first_snr(rc);
        opts.denoiser = denoiser_mode_from_string(rc.denoiser);
        opts.seed = rc.seed;
        KeystreamCipher cipher = KeystreamCipher::from_hex(rc.key_hex, rc.nonce);
        if (rc.encrypt) {
            opts.encrypt = true;
            opts.tx_cipher = &cipher;
            opts.rx_cipher = &cipher;
        }
        InferResult res = infer(model->model, ctx, img, opts);
        if (image_out) write_image(res.reconstructed, image_out);
        fill_metrics(res.metrics, metrics_out);
    });
}

hdasc_status hdasc_sweep_snr(const hdasc_model* model, const hdasc_config* cfg,
                             const char* csv_out) {
    if (!model || !cfg || !csv_out) return HDASC_ERR_CONFIG;
    return guarded([&] {
        const RunConfig& rc = cfg->cfg;
        std::vector<ImageSample> eval = prepare_eval_set(rc);
        SweepResult result = run_snr_sweep(model->model, rc, rc.snr_values(), rc.trials, eval);
        result.write(csv_out);
    });
}

hdasc_status hdasc_sweep_da(const char* const* checkpoint_paths, size_t count,
                            const hdasc_config* cfg, const char* csv_out) {
    if (!cfg || !csv_out) return HDASC_ERR_CONFIG;
    return guarded([&] {
        const RunConfig& rc = cfg->cfg;
        std::vector<Model> models = load_models(checkpoint_paths, count);
        std::vector<Model*> ptrs;
        for (auto& m : models) ptrs.push_back(&m);
        std::vector<ImageSample> eval = prepare_eval_set(rc);
        SweepResult result = run_da_ratio_sweep(ptrs, rc, first_snr(rc), rc.trials, eval);
        result.write(csv_out);
    });
}

hdasc_status hdasc_sweep_bandwidth(const char* const* checkpoint_paths, size_t count,
                                   const hdasc_config* cfg, const char* csv_out) {
    if (!cfg || !csv_out) return HDASC_ERR_CONFIG;
    return guarded([&] {
        const RunConfig& rc = cfg->cfg;
        std::vector<Model> models = load_models(checkpoint_paths, count);
        std::vector<Model*> ptrs;
        for (auto& m : models) ptrs.push_back(&m);
        std::vector<ImageSample> eval = prepare_eval_set(rc);
        SweepResult result = run_bandwidth_sweep(ptrs, rc, first_snr(rc), rc.trials, eval);
        result.write(csv_out);
    });
}

hdasc_status hdasc_security_eval(const hdasc_model* model, const hdasc_config* cfg,
                                 const char* csv_out) {
    if (!model || !cfg || !csv_out) return HDASC_ERR_CONFIG;
    return guarded([&] {
        const RunConfig& rc = cfg->cfg;
        std::vector<ImageSample> eval = prepare_eval_set(rc);
        SecurityResult result =
            run_security_eval(model->model, rc, first_snr(rc), rc.trials, eval);
        result.write(csv_out);
    });
}

hdasc_status hdasc_selftest(int verbose) {
    return guarded([&] { run_selftest(verbose != 0); });
}

}  // extern "C"
