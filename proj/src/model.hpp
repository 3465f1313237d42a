#pragma once

#include "config.hpp"
#include "diffusion.hpp"
#include "entropy_model.hpp"
#include "hda_link.hpp"
#include "semantic_codec.hpp"

namespace hdasc {

// All learnable state of the system, grouped the way training stages and the
// checkpoint format expect.
struct Model {
    RunConfig cfg;

    SemanticEncoder encoder;     // group alpha_t
    SemanticDecoder decoder;     // group alpha_r
    HyperCodec hyper;            // groups theta_t / theta_r (decoder shared TX/RX)
    AnalogCodec analog;          // groups beta_t / beta_r
    FactorizedDensity density;   // group psi
    NoisePredictor predictor;    // group omega
    OneStepDenoiser onestep;     // group omega_onestep

    bool semantic_trained = false;
    bool transceiver_trained = false;
    bool predictor_trained = false;
    bool onestep_trained = false;

    static Model init(const RunConfig& cfg);

    SemanticCodecConfig sem_cfg() const;
    HdaConfig hda_cfg() const;

    // Fixed group order; the checkpoint requires every group to be present.
    static const std::vector<std::string>& group_names();
    std::vector<std::pair<std::string, ParamList>> groups();
    ParamList group(const std::string& name);
    ParamList all_params();
};

}  // namespace hdasc
