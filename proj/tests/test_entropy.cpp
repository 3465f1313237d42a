#include "doctest.h"

#include <cmath>

#include "bitstream.hpp"
#include "gradcheck.hpp"
#include "range_coder.hpp"

using namespace hdasc;

namespace {

CodingTable uniform_table(int nbins) {
    CodingTable t;
    t.support = (nbins - 1) / 2;
    const uint32_t total = 1u << 16;
    std::vector<uint32_t> freq(nbins, total / nbins);
    uint32_t rem = total - (total / nbins) * nbins;
    for (uint32_t i = 0; i < rem; ++i) ++freq[i];
    std::vector<uint32_t> cum(nbins + 1, 0);
    for (int i = 0; i < nbins; ++i) cum[i + 1] = cum[i] + freq[i];
    t.freq = {freq};
    t.cum = {cum};
    return t;
}

// Inverse-CDF sampling from a table row.
int32_t sample_symbol(const CodingTable& t, size_t ch, Rng& rng) {
    const uint32_t u = static_cast<uint32_t>(rng.next_below(1u << 16));
    const auto& cum = t.cum[ch];
    size_t lo = 0, hi = cum.size() - 1;
    while (lo + 1 < hi) {
        const size_t mid = (lo + hi) / 2;
        if (cum[mid] <= u)
            lo = mid;
        else
            hi = mid;
    }
    return static_cast<int32_t>(lo) - t.support;
}

}  // namespace

TEST_CASE("quantize rounding rule, fixed point, error bound, saturation") {
    Tensor z(Shape{3}, {0.4, -0.5, 2.5});
    auto q = quantize(z);
    CHECK(q[0] == 0);
    CHECK(q[1] == -1);
    CHECK(q[2] == 3);

    Tensor zi(Shape{4}, {-3.0, 0.0, 7.0, 255.0});
    auto qi = quantize(zi);
    Tensor back = dequantize(qi, zi.shape());
    for (size_t i = 0; i < zi.numel(); ++i) CHECK(back[i] == zi[i]);

    Rng rng(5);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double v = rng.uniform(-200.0, 200.0);
        Tensor t(Shape{1}, std::vector<double>{v});
        worst = std::max(worst, std::abs(dequantize(quantize(t), t.shape())[0] - v));
    }
    CHECK(worst <= 0.5);

    size_t clipped = 0;
    Tensor big(Shape{2}, {300.0, -444.0});
    auto qb = quantize(big, 255, &clipped);
    CHECK(clipped == 2);
    CHECK(qb[0] == 255);
    CHECK(qb[1] == -255);
}

TEST_CASE("factorized density: normalization, unimodal init, monotone cumulative") {
    Rng rng(11);
    FactorizedDensity fd(3, rng);

    for (int c = 0; c < 3; ++c) {
        double total = 0.0;
        for (int b = -255; b <= 255; ++b) total += fd.bin_probability(b, c);
        CHECK(std::abs(total - 1.0) < 1e-9);

        const double p0 = fd.bin_probability(0, c);
        for (int far : {-250, -180, 180, 250}) CHECK(p0 >= fd.bin_probability(far, c));

        Tensor grid(Shape{1, 1000});
        for (int i = 0; i < 1000; ++i) grid[i] = -40.0 + 80.0 * i / 999.0;
        Tensor cval = fd.cumulative(c, grid);
        for (int i = 1; i < 1000; ++i) CHECK(cval[i] >= cval[i - 1]);
        CHECK(cval[0] >= 0.0);
        CHECK(cval[999] <= 1.0);
    }
}

TEST_CASE("frozen coding table: bins positive, rows sum to 2^16") {
    Rng rng(13);
    FactorizedDensity fd(2, rng);
    CodingTable t = fd.freeze();
    REQUIRE(t.channels() == 2);
    for (int c = 0; c < 2; ++c) {
        uint64_t sum = 0;
        for (uint32_t f : t.freq[c]) {
            CHECK(f >= 1);
            sum += f;
        }
        CHECK(sum == (1u << 16));
        CHECK(t.cum[c].back() == (1u << 16));
    }
}

TEST_CASE("range coder: empty sequence gives header-only stream that round-trips") {
    Rng rng(17);
    FactorizedDensity fd(2, rng);
    CodingTable t = fd.freeze();
    Bitstream bs = range_encode({{}, {}}, t);
    CHECK(bs.payload.empty());
    auto bytes = bs.serialize();
    CHECK(bytes.size() == bs.header_bytes());
    Bitstream parsed = Bitstream::parse(bytes);
    auto sym = range_decode(parsed, t);
    CHECK(sym.size() == 2);
    CHECK(sym[0].empty());
    CHECK(sym[1].empty());
}

TEST_CASE("range coder: uniform 256-bin density codes at ~8 bits per symbol") {
    CodingTable t = uniform_table(256);
    Rng rng(19);
    std::vector<int32_t> sym(100000);
    for (auto& s : sym) s = static_cast<int32_t>(rng.next_below(256)) - t.support;
    Bitstream bs = range_encode({sym}, t);
    const double bits_per_symbol = 8.0 * bs.payload.size() / sym.size();
    CHECK(bits_per_symbol == doctest::Approx(8.0).epsilon(0.02));
    // uniform entropy in nats: ln 256
    const double nats = table_cross_entropy_bits({sym}, t) / sym.size() * std::log(2.0);
    CHECK(nats == doctest::Approx(std::log(256.0)).epsilon(0.005));
    auto back = range_decode(bs, t);
    REQUIRE(back[0].size() == sym.size());
    for (size_t i = 0; i < sym.size(); ++i) REQUIRE(back[0][i] == sym[i]);
}

TEST_CASE("range coder: model-sampled symbols stay within 2% + 32 bits of cross-entropy") {
    Rng rng(23);
    FactorizedDensity fd(1, rng);
    CodingTable t = fd.freeze();
    Rng srng(29);
    std::vector<int32_t> sym(100000);
    for (auto& s : sym) s = sample_symbol(t, 0, srng);
    Bitstream bs = range_encode({sym}, t);
    const double coded_bits = 8.0 * bs.payload.size();
    const double ce_bits = table_cross_entropy_bits({sym}, t);
    CHECK(coded_bits <= ce_bits * 1.02 + 32.0);
    auto back = range_decode(bs, t);
    for (size_t i = 0; i < sym.size(); ++i) REQUIRE(back[0][i] == sym[i]);
}

TEST_CASE("range coder round-trip property across random tables and sequences") {
    Rng rng(31);
    for (int trial = 0; trial < 400; ++trial) {
        // random skewed table over a small support
        const int support = 1 + static_cast<int>(rng.next_below(40));
        const int nbins = 2 * support + 1;
        std::vector<double> w(nbins);
        double tot = 0.0;
        for (auto& x : w) {
            x = std::pow(rng.uniform(), rng.uniform(0.5, 6.0));  // heavy skew
            tot += x;
        }
        CodingTable t;
        t.support = support;
        std::vector<uint32_t> freq(nbins);
        uint64_t assigned = 0;
        for (int i = 0; i < nbins; ++i) {
            freq[i] = 1 + static_cast<uint32_t>(w[i] / tot * (65536.0 - nbins));
            assigned += freq[i];
        }
        freq[0] += static_cast<uint32_t>(65536 - assigned);
        std::vector<uint32_t> cum(nbins + 1, 0);
        for (int i = 0; i < nbins; ++i) cum[i + 1] = cum[i] + freq[i];
        t.freq = {freq};
        t.cum = {cum};

        const size_t n = rng.next_below(300);
        std::vector<int32_t> sym(n);
        for (auto& s : sym) s = sample_symbol(t, 0, rng);
        Bitstream bs = range_encode({sym}, t);
        Bitstream parsed = Bitstream::parse(bs.serialize());
        auto back = range_decode(parsed, t);
        REQUIRE(back[0].size() == n);
        for (size_t i = 0; i < n; ++i) REQUIRE(back[0][i] == sym[i]);
    }
}

TEST_CASE("bitstream framing errors") {
    Rng rng(37);
    FactorizedDensity fd(1, rng);
    CodingTable t = fd.freeze();
    Bitstream bs = range_encode({{1, -5, 7}}, t);
    auto bytes = bs.serialize();

    auto corrupt_magic = bytes;
    corrupt_magic[0] ^= 0xff;
    CHECK_THROWS_AS(Bitstream::parse(corrupt_magic), FramingError);

    auto corrupt_version = bytes;
    corrupt_version[4] = 9;
    CHECK_THROWS_AS(Bitstream::parse(corrupt_version), FramingError);

    std::vector<uint8_t> truncated(bytes.begin(), bytes.begin() + 5);
    CHECK_THROWS_AS(Bitstream::parse(truncated), FramingError);

    CHECK_THROWS_AS(range_encode({{9999}}, t), EncodingError);
}

TEST_CASE("rate loss: direct evaluation oracle and finite-difference gradients") {
    Rng rng(41);
    FactorizedDensity fd(2, rng);

    Tensor zd(Shape{2, 2, 2});
    Rng vr(43);
    for (size_t i = 0; i < zd.numel(); ++i) zd[i] = vr.uniform(-4.0, 4.0);

    // direct per-element evaluation of E[-ln p]
    double expected = 0.0;
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 4; ++i) {
            const double v = zd[static_cast<size_t>(c) * 4 + i];
            Tensor hi(Shape{1, 1}, std::vector<double>{v + 0.5});
            Tensor lo(Shape{1, 1}, std::vector<double>{v - 0.5});
            const double p = std::max(fd.cumulative(c, hi)[0] - fd.cumulative(c, lo)[0],
                                      kMinBinProbability);
            expected -= std::log(p);
        }
    expected /= 8.0;
    CHECK(fd.rate_loss_value(zd) == doctest::Approx(expected).epsilon(1e-12));

    // gradient w.r.t. the features
    auto wrt_zd = [&](const Var& v) { return fd.rate_loss(v); };
    CHECK(finite_difference_check(wrt_zd, zd, 1e-4) < 1e-3);

    // gradient w.r.t. density parameters (through a fresh density each eval)
    ParamList psi;
    fd.collect("psi", psi);
    for (const char* pick : {"psi/ch0/h2", "psi/ch0/b1", "psi/ch1/a2"}) {
        Var target;
        for (auto& p : psi)
            if (p.name == pick) target = p.var;
        REQUIRE(target.defined());
        Var loss = fd.rate_loss(Var::constant(zd));
        for (auto& p : psi) p.var.zero_grad();
        backward(loss);
        Tensor analytic = target.has_grad() ? target.grad() : Tensor::zeros(target.value().shape());
        // central differences by nudging the shared parameter in place
        double worst = 0.0;
        for (size_t i = 0; i < target.value().numel(); ++i) {
            const double keep = target.value()[i];
            const double eps = 1e-5;
            target.value_mut()[i] = keep + eps;
            const double fp = fd.rate_loss_value(zd);
            target.value_mut()[i] = keep - eps;
            const double fm = fd.rate_loss_value(zd);
            target.value_mut()[i] = keep;
            const double numeric = (fp - fm) / (2 * eps);
            worst = std::max(worst,
                             std::abs(analytic[i] - numeric) / (std::abs(analytic[i]) + 1e-4));
        }
        CHECK(worst < 1e-3);
    }
}
