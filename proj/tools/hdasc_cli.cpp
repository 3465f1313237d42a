// Command-line front end; talks to the core exclusively through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hdasc.h"

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> checkpoints;
    std::string snr_list;
    std::string channel;
    int trials = -1;
    long long seed = -1;
    std::string denoiser;
    std::string encrypt;
    std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file (key = value lines)");
    cmd->add_option("--checkpoint", args.checkpoints, "checkpoint path (repeatable)");
    cmd->add_option("--snr", args.snr_list, "comma-separated SNR list in dB");
    cmd->add_option("--channel", args.channel, "awgn | rayleigh | rician");
    cmd->add_option("--trials", args.trials, "trials per configuration point");
    cmd->add_option("--seed", args.seed, "root seed");
    cmd->add_option("--denoiser", args.denoiser, "off | diff | onestep");
    cmd->add_option("--encrypt", args.encrypt, "on | off");
    cmd->add_option("--out", args.out, "output path");
}

struct ConfigHandle {
    hdasc_config* cfg = hdasc_config_create();
    ~ConfigHandle() { hdasc_config_destroy(cfg); }
};

struct ModelHandle {
    hdasc_model* model = nullptr;
    ~ModelHandle() { hdasc_model_destroy(model); }
};

int report(hdasc_status status) {
    if (status != HDASC_OK) std::fprintf(stderr, "error: %s\n", hdasc_last_error());
    return static_cast<int>(status);
}

// CLI flags override file-provided values.
hdasc_status apply_args(hdasc_config* cfg, const CommonArgs& args) {
    hdasc_status st = HDASC_OK;
    if (!args.config_path.empty()) st = hdasc_config_load(cfg, args.config_path.c_str());
    if (st != HDASC_OK) return st;
    auto set = [&](const char* key, const std::string& value) {
        if (st == HDASC_OK && !value.empty()) st = hdasc_config_set(cfg, key, value.c_str());
    };
    set("snr_list", args.snr_list);
    set("channel", args.channel);
    set("denoiser", args.denoiser);
    if (args.trials >= 0) set("trials", std::to_string(args.trials));
    if (args.seed >= 0) set("seed", std::to_string(args.seed));
    if (!args.encrypt.empty())
        set("encrypt", args.encrypt == "on" ? "true" : (args.encrypt == "off" ? "false" : args.encrypt));
    return st;
}

hdasc_status load_single(const CommonArgs& args, ModelHandle& mh) {
    if (args.checkpoints.size() != 1) {
        std::fprintf(stderr, "error: exactly one --checkpoint required\n");
        return HDASC_ERR_CONFIG;
    }
    return hdasc_model_load(args.checkpoints[0].c_str(), &mh.model);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid digital-analog semantic image transmission"};
    app.require_subcommand(1);

    CommonArgs train_args, infer_args, snr_args, da_args, bw_args, sec_args;
    std::string infer_image;

    CLI::App* train = app.add_subcommand("train", "train a model and write a checkpoint");
    add_common(train, train_args);

    CLI::App* infer = app.add_subcommand("infer", "send one image through the trained link");
    add_common(infer, infer_args);
    infer->add_option("--image", infer_image, "input image (PNG or PPM)")->required();

    CLI::App* sweep_snr = app.add_subcommand("sweep-snr", "metrics across an SNR range");
    add_common(sweep_snr, snr_args);

    CLI::App* sweep_da =
        app.add_subcommand("sweep-da", "metrics across digital-analog ratios (fixed budget)");
    add_common(sweep_da, da_args);

    CLI::App* sweep_bw = app.add_subcommand("sweep-bw", "metrics across bandwidth ratios");
    add_common(sweep_bw, bw_args);

    CLI::App* security = app.add_subcommand("security", "encrypted vs eavesdropper comparison");
    add_common(security, sec_args);

    CLI::App* selftest = app.add_subcommand("selftest", "fast internal consistency checks");
    bool quiet = false;
    selftest->add_flag("--quiet", quiet, "suppress per-check output");

    CLI11_PARSE(app, argc, argv);

    if (selftest->parsed()) return report(hdasc_selftest(quiet ? 0 : 1));

    if (train->parsed()) {
        ConfigHandle ch;
        hdasc_status st = apply_args(ch.cfg, train_args);
        if (st != HDASC_OK) return report(st);
        const std::string out = train_args.out.empty() ? "model.ckpt" : train_args.out;
        st = hdasc_train(ch.cfg, out.c_str());
        if (st == HDASC_OK) std::printf("checkpoint written to %s\n", out.c_str());
        return report(st);
    }

    if (infer->parsed()) {
        ConfigHandle ch;
        hdasc_status st = apply_args(ch.cfg, infer_args);
        if (st != HDASC_OK) return report(st);
        ModelHandle mh;
        st = load_single(infer_args, mh);
        if (st != HDASC_OK) return report(st);
        hdasc_metrics metrics{};
        st = hdasc_infer_image(mh.model, ch.cfg, infer_image.c_str(),
                               infer_args.out.empty() ? nullptr : infer_args.out.c_str(),
                               &metrics);
        if (st == HDASC_OK)
            std::printf("snr=%.2f dB channel=%s psnr=%.3f dB ms_ssim=%.4f eta=%.4f da=%.3f "
                        "bpp=%.4f denoiser=%s\n",
                        metrics.snr_db, metrics.channel, metrics.psnr_db, metrics.ms_ssim,
                        metrics.eta, metrics.da_ratio, metrics.bits_per_pixel, metrics.denoiser);
        return report(st);
    }

    auto run_sweep = [&](CLI::App* cmd, CommonArgs& args,
                         hdasc_status (*single)(const hdasc_model*, const hdasc_config*,
                                                const char*),
                         hdasc_status (*multi)(const char* const*, size_t, const hdasc_config*,
                                               const char*)) -> int {
        if (!cmd->parsed()) return -1;
        ConfigHandle ch;
        hdasc_status st = apply_args(ch.cfg, args);
        if (st != HDASC_OK) return report(st);
        const std::string out = args.out.empty() ? std::string(cmd->get_name()) + ".csv" : args.out;
        if (multi) {
            std::vector<const char*> paths;
            for (const auto& p : args.checkpoints) paths.push_back(p.c_str());
            st = multi(paths.data(), paths.size(), ch.cfg, out.c_str());
        } else {
            ModelHandle mh;
            st = load_single(args, mh);
            if (st != HDASC_OK) return report(st);
            st = single(mh.model, ch.cfg, out.c_str());
        }
        if (st == HDASC_OK) std::printf("wrote %s\n", out.c_str());
        return report(st);
    };

    int rc;
    if ((rc = run_sweep(sweep_snr, snr_args, hdasc_sweep_snr, nullptr)) >= 0) return rc;
    if ((rc = run_sweep(sweep_da, da_args, nullptr, hdasc_sweep_da)) >= 0) return rc;
    if ((rc = run_sweep(sweep_bw, bw_args, nullptr, hdasc_sweep_bandwidth)) >= 0) return rc;
    if ((rc = run_sweep(security, sec_args, hdasc_security_eval, nullptr)) >= 0) return rc;

    return 0;
}
