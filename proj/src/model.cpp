#include "model.hpp"

namespace hdasc {

SemanticCodecConfig Model::sem_cfg() const {
    SemanticCodecConfig c;
    c.image_size = cfg.image_size;
    c.hidden_channels = cfg.hidden_channels;
    c.feature_channels = cfg.feature_channels;
    return c;
}

HdaConfig Model::hda_cfg() const {
    HdaConfig c;
    c.feature_channels = cfg.feature_channels;
    c.feature_grid = cfg.image_size / 4;
    c.hyper_hidden = cfg.hyper_hidden;
    c.hyper_channels = cfg.hyper_channels;
    c.analog_symbols = cfg.analog_symbols;
    c.analog_hidden = cfg.analog_hidden;
    return c;
}

Model Model::init(const RunConfig& cfg) {
    cfg.validate();
    Model m;
    m.cfg = cfg;
    // independent seeded streams so one subnet's width cannot shift another's
    // initialization
    Rng r_enc(derive_seed(cfg.seed, 0xa1));
    Rng r_dec(derive_seed(cfg.seed, 0xa2));
    Rng r_hyp(derive_seed(cfg.seed, 0xa3));
    Rng r_ana(derive_seed(cfg.seed, 0xa4));
    Rng r_psi(derive_seed(cfg.seed, 0xa5));
    Rng r_omg(derive_seed(cfg.seed, 0xa6));
    Rng r_one(derive_seed(cfg.seed, 0xa7));

    m.encoder = SemanticEncoder(m.sem_cfg(), r_enc);
    m.decoder = SemanticDecoder(m.sem_cfg(), r_dec);
    m.hyper = HyperCodec(m.hda_cfg(), r_hyp);
    m.analog = AnalogCodec(m.hda_cfg(), r_ana);
    m.density = FactorizedDensity(cfg.hyper_channels, r_psi);
    m.predictor = NoisePredictor(2 * cfg.analog_symbols, cfg.predictor_width,
                                 cfg.predictor_embed, r_omg);
    m.onestep = OneStepDenoiser(2 * cfg.analog_symbols, cfg.predictor_width, r_one);
    return m;
}

const std::vector<std::string>& Model::group_names() {
    static const std::vector<std::string> names = {"alpha_t", "alpha_r", "theta_t",
                                                   "theta_r", "beta_t",  "beta_r",
                                                   "psi",     "omega",   "omega_onestep"};
    return names;
}

std::vector<std::pair<std::string, ParamList>> Model::groups() {
    std::vector<std::pair<std::string, ParamList>> out;
    for (const std::string& name : group_names()) out.emplace_back(name, group(name));
    return out;
}

ParamList Model::group(const std::string& name) {
    ParamList out;
    if (name == "alpha_t") encoder.collect(out);
    else if (name == "alpha_r") decoder.collect(out);
    else if (name == "theta_t") hyper.collect_encoder(out);
    else if (name == "theta_r") hyper.collect_decoder(out);
    else if (name == "beta_t") analog.collect_encoder(out);
    else if (name == "beta_r") analog.collect_decoder(out);
    else if (name == "psi") density.collect("psi", out);
    else if (name == "omega") predictor.collect("omega", out);
    else if (name == "omega_onestep") onestep.collect("omega_onestep", out);
    else throw ConfigError("unknown parameter group: " + name);
    return out;
}

ParamList Model::all_params() {
    ParamList out;
    for (const std::string& name : group_names()) {
        ParamList g = group(name);
        out.insert(out.end(), g.begin(), g.end());
    }
    return out;
}

}  // namespace hdasc
