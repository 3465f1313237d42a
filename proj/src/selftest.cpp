#include <cmath>
#include <cstdio>

#include "cipher.hpp"
#include "diffusion.hpp"
#include "image.hpp"
#include "ldpc.hpp"
#include "metrics.hpp"
#include "modulation.hpp"
#include "version.hpp"

namespace hdasc {

namespace {

void check(bool ok, const char* what, bool verbose) {
    if (verbose) std::printf("%s %s\n", ok ? "ok  " : "FAIL", what);
    if (!ok) throw Error(std::string("selftest failed: ") + what, 4);
}

}  // namespace

void run_selftest(bool verbose) {
    {
        DiffusionSchedule s = build_schedule(50);
        bool ok = std::abs(s.gamma[1] - 0.01) < 1e-15 && std::abs(s.gamma[50] - 0.5) < 1e-15;
        for (int t = 1; t <= 50; ++t)
            ok = ok && std::abs(s.alpha_bar[t] * s.alpha_bar[t] +
                                s.gamma_bar[t] * s.gamma_bar[t] - 1.0) <= 1e-12;
        check(ok, "diffusion schedule identities", verbose);
    }
    {
        Rng rng(1);
        FactorizedDensity fd(2, rng);
        CodingTable table = fd.freeze();
        bool ok = true;
        for (int trial = 0; trial < 100 && ok; ++trial) {
            std::vector<std::vector<int32_t>> sym(2);
            for (auto& ch : sym) {
                ch.resize(rng.next_below(200));
                for (auto& s : ch) s = static_cast<int32_t>(rng.next_below(21)) - 10;
            }
            Bitstream bs = Bitstream::parse(range_encode(sym, table).serialize());
            ok = range_decode(bs, table) == sym;
        }
        check(ok, "entropy coder round-trip", verbose);
    }
    {
        bool ok = true;
        for (const char* name : {"/ldpc_672_r12.txt", "/ldpc_672_r34.txt"}) {
            LdpcCode code = LdpcCode::load(default_data_dir() + name);
            Rng rng(2);
            std::vector<uint8_t> info(code.k());
            for (auto& b : info) b = static_cast<uint8_t>(rng.next_below(2));
            auto cw = code.encode(info);
            ok = ok && code.parity_ok(cw);
            std::vector<double> llrs(cw.size());
            for (size_t i = 0; i < cw.size(); ++i) llrs[i] = cw[i] ? -20.0 : 20.0;
            auto dec = code.decode(llrs);
            ok = ok && dec.converged && dec.info == info;
        }
        check(ok, "ldpc encode/decode noiseless", verbose);
    }
    {
        bool ok = true;
        Rng rng(3);
        for (Modulation m : {Modulation::BPSK, Modulation::QPSK, Modulation::QAM16}) {
            auto pts = constellation(m);
            double p = 0.0;
            for (auto& c : pts) p += std::norm(c);
            ok = ok && std::abs(p / pts.size() - 1.0) < 1e-9;
            std::vector<uint8_t> bits(static_cast<size_t>(bits_per_symbol(m)) * 64);
            for (auto& b : bits) b = static_cast<uint8_t>(rng.next_below(2));
            auto llrs = demodulate_soft(modulate(bits, m), m, 0.0);
            for (size_t i = 0; i < bits.size(); ++i)
                ok = ok && (llrs[i] < 0.0 ? 1 : 0) == bits[i];
        }
        check(ok, "modulation power and noiseless round-trip", verbose);
    }
    {
        Tensor a = generate_texture(32, 7).pixels;
        bool ok = compute_psnr(a, a) == 100.0 && std::abs(compute_ms_ssim(a, a) - 1.0) < 1e-12;
        check(ok, "psnr and ms-ssim identity", verbose);
    }
    {
        KeystreamCipher c1 = KeystreamCipher::from_hex(
            "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f", 7);
        Rng rng(5);
        std::vector<uint8_t> data(4096);
        for (auto& b : data) b = static_cast<uint8_t>(rng.next_below(256));
        std::vector<uint8_t> round = data;
        c1.apply(round);
        c1.apply(round);
        bool ok = round == data;
        std::vector<uint8_t> ks = c1.keystream(100000);
        size_t ones = 0;
        for (uint8_t b : ks)
            for (int i = 0; i < 8; ++i) ones += (b >> i) & 1;
        const double frac = static_cast<double>(ones) / (ks.size() * 8);
        ok = ok && std::abs(frac - 0.5) < 0.01;
        check(ok, "keystream cipher involution and balance", verbose);
    }
    if (verbose) std::printf("selftest passed (version %s)\n", kVersion);
}

}  // namespace hdasc
