#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "channel.hpp"

namespace hdasc {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct Field {
    const char* name;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

std::string fmt_double(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

double to_double(const std::string& s, const char* key) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw ConfigError(std::string("bad numeric value for ") + key + ": " + s);
    }
}

long long to_int(const std::string& s, const char* key) {
    try {
        size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw ConfigError(std::string("bad integer value for ") + key + ": " + s);
    }
}

bool to_bool(const std::string& s, const char* key) {
    if (s == "true" || s == "on" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "off" || s == "0" || s == "no") return false;
    throw ConfigError(std::string("bad boolean value for ") + key + ": " + s);
}

#define F_INT(key, member)                                                     \
    Field{#key, [](const RunConfig& c) { return std::to_string(c.member); },   \
          [](RunConfig& c, const std::string& v) {                             \
              c.member = static_cast<int>(to_int(v, #key));                    \
          }}
#define F_U64(key, member)                                                     \
    Field{#key, [](const RunConfig& c) { return std::to_string(c.member); },   \
          [](RunConfig& c, const std::string& v) {                             \
              c.member = static_cast<uint64_t>(to_int(v, #key));               \
          }}
#define F_DBL(key, member)                                                     \
    Field{#key, [](const RunConfig& c) { return fmt_double(c.member); },       \
          [](RunConfig& c, const std::string& v) { c.member = to_double(v, #key); }}
#define F_STR(key, member)                                                     \
    Field{#key, [](const RunConfig& c) { return c.member; },                   \
          [](RunConfig& c, const std::string& v) { c.member = v; }}
#define F_BOOL(key, member)                                                    \
    Field{#key, [](const RunConfig& c) { return c.member ? "true" : "false"; },\
          [](RunConfig& c, const std::string& v) { c.member = to_bool(v, #key); }}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        F_U64(seed, seed),
        F_INT(image_size, image_size),
        F_INT(dataset_size, dataset_size),
        F_INT(eval_images, eval_images),
        F_STR(data_dir, data_dir),
        F_INT(batch_size, batch_size),
        F_INT(epochs_stage1, epochs_stage1),
        F_INT(epochs_stage2, epochs_stage2),
        F_INT(epochs_stage3, epochs_stage3),
        F_DBL(learning_rate, learning_rate),
        F_DBL(lambda_f, lambda_f),
        F_DBL(lambda_z, lambda_z),
        F_DBL(lambda_r, lambda_r),
        F_STR(channel, channel),
        F_DBL(rician_r, rician_r),
        F_DBL(train_snr_min, train_snr_min),
        F_DBL(train_snr_max, train_snr_max),
        F_INT(hidden_channels, hidden_channels),
        F_INT(feature_channels, feature_channels),
        F_INT(hyper_hidden, hyper_hidden),
        F_INT(hyper_channels, hyper_channels),
        F_INT(analog_symbols, analog_symbols),
        F_INT(analog_hidden, analog_hidden),
        F_INT(diffusion_steps, diffusion_steps),
        F_INT(predictor_width, predictor_width),
        F_INT(predictor_embed, predictor_embed),
        F_INT(predictor_frames, predictor_frames),
        F_INT(predictor_steps, predictor_steps),
        F_INT(predictor_batch, predictor_batch),
        F_INT(onestep_steps, onestep_steps),
        F_DBL(denoiser_lr, denoiser_lr),
        F_INT(quant_support, quant_support),
        F_INT(ldpc_max_iters, ldpc_max_iters),
        F_DBL(ldpc_norm_factor, ldpc_norm_factor),
        F_DBL(llr_max, llr_max),
        F_BOOL(max_log_demapper, max_log_demapper),
        F_STR(amc_thresholds, amc_thresholds),
        F_STR(ldpc_dir, ldpc_dir),
        F_BOOL(loss_cd_squared, loss_cd_squared),
        F_STR(denoiser, denoiser),
        F_BOOL(denoise_digital, denoise_digital),
        F_BOOL(encrypt, encrypt),
        F_STR(key_hex, key_hex),
        F_U64(nonce, nonce),
        F_STR(eve_mode, eve_mode),
        F_INT(trials, trials),
        F_STR(snr_list, snr_list),
        F_INT(da_budget_symbols, da_budget_symbols),
        F_STR(checkpoint, checkpoint),
        F_STR(out, out),
    };
    return table;
}

#undef F_INT
#undef F_U64
#undef F_DBL
#undef F_STR
#undef F_BOOL

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    for (const Field& f : fields()) {
        if (key == f.name) {
            f.set(*this, value);
            return;
        }
    }
    throw ConfigError("unknown config key: " + key);
}

std::string RunConfig::get(const std::string& key) const {
    for (const Field& f : fields())
        if (key == f.name) return f.get(*this);
    throw ConfigError("unknown config key: " + key);
}

std::string RunConfig::serialize() const {
    std::string out;
    for (const Field& f : fields()) {
        out += f.name;
        out += " = ";
        out += f.get(*this);
        out += "\n";
    }
    return out;
}

void RunConfig::apply_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " has no '='");
        set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig cfg;
    cfg.apply_text(ss.str());
    cfg.validate();
    return cfg;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(csv);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(to_double(item, "list"));
    }
    return out;
}

std::vector<double> RunConfig::snr_values() const { return parse_double_list(snr_list); }

std::vector<double> RunConfig::amc_threshold_values() const {
    return parse_double_list(amc_thresholds);
}

void RunConfig::validate() const {
    if (image_size < 8 || image_size % 16 != 0)
        throw ConfigError("image_size must be >= 16 and divisible by 16 (codec + hyper codec)");
    if (lambda_f < 0 || lambda_z < 0 || lambda_r < 0)
        throw ConfigError("loss weights must be >= 0");
    if (learning_rate <= 0) throw ConfigError("learning_rate must be > 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (analog_symbols < 1) throw ConfigError("analog_symbols must be >= 1");
    if (diffusion_steps < 1) throw ConfigError("diffusion_steps must be >= 1");
    if (denoiser != "off" && denoiser != "diff" && denoiser != "onestep")
        throw ConfigError("denoiser must be one of off|diff|onestep");
    if (eve_mode != "garbage" && eve_mode != "zero")
        throw ConfigError("eve_mode must be garbage|zero");
    if (trials < 0) throw ConfigError("trials must be >= 0");
    if (key_hex.size() != 64) throw ConfigError("key_hex must be 64 hex characters (256-bit key)");
    if (amc_threshold_values().size() != 5) throw ConfigError("amc_thresholds needs 5 values");
    channel_kind_from_string(channel);
}

}  // namespace hdasc
