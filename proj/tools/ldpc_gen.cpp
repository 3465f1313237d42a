// Generates the quasi-cyclic parity-check matrices shipped in data/:
// lifting factor 42, 16 block columns, blocklength 672, rates 1/2 and 3/4.
// Information block columns have degree 3 with shifts chosen to keep the
// lifted graph free of 4-cycles; the parity part is a zero-shift staircase,
// which keeps the last m columns invertible for systematic encoding.
//
// Output format (one line per check): check index, then column indices.

#include <cstdio>
#include <fstream>
#include <numeric>
#include <vector>

#include "ldpc.hpp"
#include "rng.hpp"

using namespace hdasc;

namespace {

struct BaseMatrix {
    int mb, kb, z;
    // shift[i][j] = -1 for zero block, else cyclic shift
    std::vector<std::vector<int>> shift;
};

bool four_cycle_free(const BaseMatrix& bm, int col_a, int col_b) {
    int diff = -1;
    for (int i = 0; i < bm.mb; ++i) {
        const int sa = bm.shift[i][col_a], sb = bm.shift[i][col_b];
        if (sa < 0 || sb < 0) continue;
        const int d = ((sa - sb) % bm.z + bm.z) % bm.z;
        if (diff < 0)
            diff = d;
        else if (d == diff)
            return false;  // two shared rows with equal shift offset -> 4-cycle
    }
    return true;
}

BaseMatrix build(int mb, int kb, int z, uint64_t seed) {
    const int nb = kb + mb;
    BaseMatrix bm{mb, kb, z, std::vector<std::vector<int>>(mb, std::vector<int>(nb, -1))};
    // parity staircase, shift 0
    for (int i = 0; i < mb; ++i) {
        bm.shift[i][kb + i] = 0;
        if (i >= 1) bm.shift[i][kb + i - 1] = 0;
    }
    Rng rng(seed);
    std::vector<int> row_load(mb, 0);
    for (int j = 0; j < kb; ++j) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 20000) {
                std::fprintf(stderr, "construction stuck at column %d\n", j);
                std::exit(1);
            }
            // pick three distinct rows, biased toward lightly loaded ones
            std::vector<int> rows(mb);
            std::iota(rows.begin(), rows.end(), 0);
            for (int t = static_cast<int>(rows.size()) - 1; t > 0; --t)
                std::swap(rows[t], rows[rng.next_below(t + 1)]);
            std::stable_sort(rows.begin(), rows.end(),
                             [&](int a, int b) { return row_load[a] < row_load[b]; });
            const int r0 = rows[0], r1 = rows[1], r2 = rows[2];
            bm.shift[r0][j] = static_cast<int>(rng.next_below(z));
            bm.shift[r1][j] = static_cast<int>(rng.next_below(z));
            bm.shift[r2][j] = static_cast<int>(rng.next_below(z));
            bool ok = true;
            for (int other = 0; other < nb && ok; ++other) {
                if (other == j) continue;
                ok = four_cycle_free(bm, j, other);
            }
            if (ok) {
                row_load[r0]++;
                row_load[r1]++;
                row_load[r2]++;
                break;
            }
            bm.shift[r0][j] = bm.shift[r1][j] = bm.shift[r2][j] = -1;
        }
    }
    return bm;
}

void emit(const BaseMatrix& bm, const std::string& path, const std::string& label) {
    std::ofstream out(path);
    const int n = (bm.kb + bm.mb) * bm.z, m = bm.mb * bm.z;
    out << "# " << label << "\n";
    out << "# lifted quasi-cyclic parity-check matrix: n=" << n << " m=" << m
        << " z=" << bm.z << "\n";
    out << "# one line per check: check index followed by its column indices\n";
    for (int bi = 0; bi < bm.mb; ++bi)
        for (int r = 0; r < bm.z; ++r) {
            out << bi * bm.z + r;
            for (int bj = 0; bj < bm.kb + bm.mb; ++bj) {
                const int s = bm.shift[bi][bj];
                if (s < 0) continue;
                out << ' ' << bj * bm.z + (r + s) % bm.z;
            }
            out << '\n';
        }
}

void verify(const std::string& path, int expect_k) {
    LdpcCode code = LdpcCode::load(path);
    if (code.n() != 672 || code.k() != expect_k) {
        std::fprintf(stderr, "%s: wrong dimensions n=%d k=%d\n", path.c_str(), code.n(), code.k());
        std::exit(1);
    }
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
        std::vector<uint8_t> info(code.k());
        for (auto& b : info) b = static_cast<uint8_t>(rng.next_below(2));
        if (!code.parity_ok(code.encode(info))) {
            std::fprintf(stderr, "%s: encoder violates parity\n", path.c_str());
            std::exit(1);
        }
    }
    std::printf("%s: ok (n=%d, k=%d)\n", path.c_str(), code.n(), code.k());
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";
    const BaseMatrix r12 = build(8, 8, 42, 0x11ad0001);
    const BaseMatrix r34 = build(4, 12, 42, 0x11ad0003);
    emit(r12, dir + "/ldpc_672_r12.txt", "rate 1/2 code, blocklength 672");
    emit(r34, dir + "/ldpc_672_r34.txt", "rate 3/4 code, blocklength 672");
    verify(dir + "/ldpc_672_r12.txt", 336);
    verify(dir + "/ldpc_672_r34.txt", 504);
    return 0;
}
