/*
 * hdasc — hybrid digital-analog semantic image transmission simulator.
 *
 * C interface over the core library: opaque handles, integer status codes,
 * and a thread-local error message. Status values double as process exit
 * codes (0 ok, 2 config error, 3 checkpoint error, 4 runtime failure).
 */

#ifndef HDASC_H
#define HDASC_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    HDASC_OK = 0,
    HDASC_ERR_CONFIG = 2,
    HDASC_ERR_CHECKPOINT = 3,
    HDASC_ERR_RUNTIME = 4
} hdasc_status;

typedef struct hdasc_config hdasc_config;
typedef struct hdasc_model hdasc_model;

typedef struct {
    double snr_db;
    double eta;            /* transmitted symbols / (3 H W) */
    double da_ratio;       /* digital symbols / analog symbols */
    double bits_per_pixel;
    double psnr_db;
    double ms_ssim;
    int frames_dropped;
    int encrypted;
    char channel[16];
    char denoiser[16];
} hdasc_metrics;

const char* hdasc_version(void);

/* Message for the calling thread's most recent failing call. */
const char* hdasc_last_error(void);

/* ------------------------------------------------------------- config --- */
hdasc_config* hdasc_config_create(void);
hdasc_status hdasc_config_load(hdasc_config* cfg, const char* path);
hdasc_status hdasc_config_set(hdasc_config* cfg, const char* key, const char* value);
hdasc_status hdasc_config_get(const hdasc_config* cfg, const char* key, char* buf, size_t cap);
void hdasc_config_destroy(hdasc_config* cfg);

/* ----------------------------------------------------- train and infer --- */
/* Full pipeline: three transceiver stages plus denoiser fitting; writes the
 * resulting checkpoint. Dataset comes from config data_dir, or procedural
 * textures when unset. */
hdasc_status hdasc_train(const hdasc_config* cfg, const char* checkpoint_out);

hdasc_status hdasc_model_load(const char* path, hdasc_model** out);
void hdasc_model_destroy(hdasc_model* model);

/* One image through the full link at the first SNR of config snr_list.
 * image_out may be NULL (metrics only); PNG or PPM by extension. */
hdasc_status hdasc_infer_image(const hdasc_model* model, const hdasc_config* cfg,
                               const char* image_in, const char* image_out,
                               hdasc_metrics* metrics_out);

/* -------------------------------------------------------- experiments --- */
hdasc_status hdasc_sweep_snr(const hdasc_model* model, const hdasc_config* cfg,
                             const char* csv_out);

/* One trained checkpoint per DA ratio, common symbol budget from config. */
hdasc_status hdasc_sweep_da(const char* const* checkpoint_paths, size_t count,
                            const hdasc_config* cfg, const char* csv_out);

/* One trained checkpoint per bandwidth point. */
hdasc_status hdasc_sweep_bandwidth(const char* const* checkpoint_paths, size_t count,
                                   const hdasc_config* cfg, const char* csv_out);

hdasc_status hdasc_security_eval(const hdasc_model* model, const hdasc_config* cfg,
                                 const char* csv_out);

/* Fast internal consistency checks (entropy coder, LDPC, modulation,
 * schedule, metrics, cipher). Prints one line per check when verbose. */
hdasc_status hdasc_selftest(int verbose);

#ifdef __cplusplus
}
#endif

#endif /* HDASC_H */
