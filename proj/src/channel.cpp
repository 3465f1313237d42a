#include "channel.hpp"

#include <cmath>

namespace hdasc {

ChannelKind channel_kind_from_string(const std::string& s) {
    if (s == "awgn") return ChannelKind::AWGN;
    if (s == "rayleigh") return ChannelKind::Rayleigh;
    if (s == "rician") return ChannelKind::Rician;
    throw ConfigError("unknown channel kind: " + s);
}

std::string channel_kind_name(ChannelKind k) {
    switch (k) {
        case ChannelKind::AWGN: return "awgn";
        case ChannelKind::Rayleigh: return "rayleigh";
        case ChannelKind::Rician: return "rician";
    }
    return "?";
}

ChannelRealization sample_channel(ChannelKind kind, Rng& rng, double rician_r) {
    ChannelRealization real;
    real.kind = kind;
    switch (kind) {
        case ChannelKind::AWGN:
            real.h = cplx(1.0, 0.0);
            break;
        case ChannelKind::Rayleigh: {
            const double s = std::sqrt(0.5);
            real.h = cplx(rng.normal(0.0, s), rng.normal(0.0, s));
            break;
        }
        case ChannelKind::Rician: {
            if (rician_r < 0.0) throw ConfigError("rician factor must be >= 0");
            const double mu = std::sqrt(rician_r / (rician_r + 1.0));
            const double s = std::sqrt(1.0 / (rician_r + 1.0)) * std::sqrt(0.5);
            real.h = cplx(mu + rng.normal(0.0, s), rng.normal(0.0, s));
            break;
        }
    }
    return real;
}

std::vector<cplx> apply_channel(const std::vector<cplx>& x, ChannelRealization& real,
                                double snr_db, Rng& rng, bool noiseless) {
    real.noiseless = noiseless;
    real.sigma_n2 = noiseless ? 0.0 : std::pow(10.0, -snr_db / 10.0);
    std::vector<cplx> y(x.size());
    if (noiseless) {
        for (size_t i = 0; i < x.size(); ++i) y[i] = real.h * x[i];
        return y;
    }
    const double s = std::sqrt(real.sigma_n2 / 2.0);
    for (size_t i = 0; i < x.size(); ++i)
        y[i] = real.h * x[i] + cplx(rng.normal(0.0, s), rng.normal(0.0, s));
    return y;
}

LsDetection ls_detect(const std::vector<cplx>& y, const ChannelRealization& real) {
    const double h2 = std::norm(real.h);
    if (h2 < kDeepFadeThreshold) throw DeepFadeError("|h|^2 below detection threshold");
    const cplx w = std::conj(real.h) / h2;
    LsDetection det;
    det.x_hat.resize(y.size());
    for (size_t i = 0; i < y.size(); ++i) det.x_hat[i] = w * y[i];
    det.sigma_eff2 = real.sigma_n2 / h2;
    return det;
}

std::vector<cplx> ls_effective_noise(const ChannelRealization& real, size_t count, Rng& rng) {
    const double h2 = std::norm(real.h);
    if (h2 < kDeepFadeThreshold) throw DeepFadeError("|h|^2 below detection threshold");
    const cplx w = std::conj(real.h) / h2;
    const double s = std::sqrt(real.sigma_n2 / 2.0);
    std::vector<cplx> n(count);
    for (size_t i = 0; i < count; ++i) n[i] = w * cplx(rng.normal(0.0, s), rng.normal(0.0, s));
    return n;
}

}  // namespace hdasc
