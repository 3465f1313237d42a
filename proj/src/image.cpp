#include "image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "rng.hpp"

namespace hdasc {

namespace {

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

double byte_to_unit(uint8_t b) { return static_cast<double>(b) / 255.0; }

uint8_t unit_to_byte(double v) {
    const double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    return static_cast<uint8_t>(std::lround(c * 255.0));
}

}  // namespace

// ------------------------------------------------------------------ PPM ---

ImageSample read_ppm(const std::string& path) {
    std::vector<uint8_t> bytes = read_file(path);
    size_t pos = 0;
    auto token = [&]() -> std::string {
        while (pos < bytes.size()) {
            if (std::isspace(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
        std::string t;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) t += static_cast<char>(bytes[pos++]);
        return t;
    };
    const std::string magic = token();
    if (magic != "P6" && magic != "P5") throw FramingError(path + ": not a binary PPM/PGM");
    const int w = std::stoi(token());
    const int h = std::stoi(token());
    const int maxval = std::stoi(token());
    if (w <= 0 || h <= 0 || maxval != 255) throw FramingError(path + ": unsupported PPM header");
    ++pos;  // single whitespace after maxval
    const int ch = magic == "P6" ? 3 : 1;
    const size_t need = static_cast<size_t>(w) * h * ch;
    if (bytes.size() - pos < need) throw FramingError(path + ": truncated PPM payload");
    ImageSample img{Tensor(Shape{3, h, w}), path};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const size_t o = pos + (static_cast<size_t>(y) * w + x) * ch;
            for (int c = 0; c < 3; ++c)
                img.pixels[(static_cast<size_t>(c) * h + y) * w + x] =
                    byte_to_unit(bytes[o + (ch == 3 ? c : 0)]);
        }
    return img;
}

void write_ppm(const ImageSample& img, const std::string& path) {
    const int h = img.height(), w = img.width();
    std::string header = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    std::vector<uint8_t> bytes(header.begin(), header.end());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                bytes.push_back(unit_to_byte(img.pixels[(static_cast<size_t>(c) * h + y) * w + x]));
    write_file(path, bytes);
}

// ------------------------------------------------------------- checksums ---

uint32_t crc32(const uint8_t* data, size_t size, uint32_t seed) {
    static uint32_t table[256];
    static bool init = false;
    if (!init) {
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            table[i] = c;
        }
        init = true;
    }
    uint32_t c = seed ^ 0xffffffffu;
    for (size_t i = 0; i < size; ++i) c = table[(c ^ data[i]) & 0xffu] ^ (c >> 8);
    return c ^ 0xffffffffu;
}

uint32_t adler32(const uint8_t* data, size_t size) {
    uint32_t a = 1, b = 0;
    for (size_t i = 0; i < size; ++i) {
        a = (a + data[i]) % 65521u;
        b = (b + a) % 65521u;
    }
    return (b << 16) | a;
}

// --------------------------------------------------------------- inflate ---

namespace {

class BitReader {
public:
    BitReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

    uint32_t bits(int count) {
        while (bitcnt_ < count) {
            if (pos_ >= size_) throw FramingError("deflate: out of input bits");
            bitbuf_ |= static_cast<uint32_t>(data_[pos_++]) << bitcnt_;
            bitcnt_ += 8;
        }
        const uint32_t v = bitbuf_ & ((1u << count) - 1u);
        bitbuf_ >>= count;
        bitcnt_ -= count;
        return v;
    }

    void align_byte() {
        bitbuf_ = 0;
        bitcnt_ = 0;
    }

    uint8_t byte() {
        if (pos_ >= size_) throw FramingError("deflate: out of input bytes");
        return data_[pos_++];
    }

private:
    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
    uint32_t bitbuf_ = 0;
    int bitcnt_ = 0;
};

// Canonical Huffman decoder over code lengths (bit-by-bit; inputs are tiny).
struct Huffman {
    // first_code[len], first_symbol[len], counts; symbols sorted by (len, symbol)
    int counts[16] = {0};
    int firsts[16] = {0};
    std::vector<int> symbols;

    explicit Huffman(const std::vector<int>& lengths) {
        for (int l : lengths)
            if (l) counts[l]++;
        int code = 0;
        for (int len = 1; len < 16; ++len) {
            code = (code + counts[len - 1]) << 1;
            firsts[len] = code;
        }
        std::vector<int> next(16);
        int acc = 0;
        for (int len = 1; len < 16; ++len) {
            next[len] = acc;
            acc += counts[len];
        }
        symbols.resize(acc);
        for (size_t s = 0; s < lengths.size(); ++s)
            if (lengths[s]) symbols[next[lengths[s]]++] = static_cast<int>(s);
    }

    int decode(BitReader& br) const {
        int code = 0, index = 0, first = 0;
        for (int len = 1; len < 16; ++len) {
            code |= static_cast<int>(br.bits(1));
            const int count = counts[len];
            if (code - first < count) return symbols[index + (code - first)];
            index += count;
            first = (first + count) << 1;
            code <<= 1;
        }
        throw FramingError("deflate: invalid Huffman code");
    }
};

const int kLenBase[29] = {3,  4,  5,  6,  7,  8,  9,  10, 11,  13,  15,  17,  19,  23, 27,
                          31, 35, 43, 51, 59, 67, 83, 99, 115, 131, 163, 195, 227, 258};
const int kLenExtra[29] = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2,
                           2, 3, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 0};
const int kDistBase[30] = {1,    2,    3,    4,    5,    7,     9,     13,    17,   25,
                           33,   49,   65,   97,   129,  193,   257,   385,   513,  769,
                           1025, 1537, 2049, 3073, 4097, 6145,  8193,  12289, 16385, 24577};
const int kDistExtra[30] = {0, 0, 0, 0, 1, 1, 2, 2, 3, 3, 4,  4,  5,  5,  6,
                            6, 7, 7, 8, 8, 9, 9, 10, 10, 11, 11, 12, 12, 13, 13};

void inflate_block(BitReader& br, const Huffman& lit, const Huffman& dist,
                   std::vector<uint8_t>& out) {
    for (;;) {
        const int sym = lit.decode(br);
        if (sym < 256) {
            out.push_back(static_cast<uint8_t>(sym));
        } else if (sym == 256) {
            return;
        } else {
            if (sym > 285) throw FramingError("deflate: bad length symbol");
            const int li = sym - 257;
            const int len = kLenBase[li] + static_cast<int>(br.bits(kLenExtra[li]));
            const int ds = dist.decode(br);
            if (ds > 29) throw FramingError("deflate: bad distance symbol");
            const size_t d = static_cast<size_t>(kDistBase[ds]) + br.bits(kDistExtra[ds]);
            if (d > out.size()) throw FramingError("deflate: distance beyond output");
            for (int i = 0; i < len; ++i) out.push_back(out[out.size() - d]);
        }
    }
}

}  // namespace

std::vector<uint8_t> inflate(const uint8_t* data, size_t size) {
    BitReader br(data, size);
    std::vector<uint8_t> out;
    for (;;) {
        const uint32_t bfinal = br.bits(1);
        const uint32_t btype = br.bits(2);
        if (btype == 0) {
            br.align_byte();
            const uint32_t len = br.byte() | (static_cast<uint32_t>(br.byte()) << 8);
            const uint32_t nlen = br.byte() | (static_cast<uint32_t>(br.byte()) << 8);
            if ((len ^ 0xffffu) != nlen) throw FramingError("deflate: stored block length check");
            for (uint32_t i = 0; i < len; ++i) out.push_back(br.byte());
        } else if (btype == 1) {
            std::vector<int> litlen(288);
            for (int i = 0; i < 144; ++i) litlen[i] = 8;
            for (int i = 144; i < 256; ++i) litlen[i] = 9;
            for (int i = 256; i < 280; ++i) litlen[i] = 7;
            for (int i = 280; i < 288; ++i) litlen[i] = 8;
            Huffman lit(litlen);
            Huffman dist(std::vector<int>(30, 5));
            inflate_block(br, lit, dist, out);
        } else if (btype == 2) {
            const int hlit = static_cast<int>(br.bits(5)) + 257;
            const int hdist = static_cast<int>(br.bits(5)) + 1;
            const int hclen = static_cast<int>(br.bits(4)) + 4;
            static const int order[19] = {16, 17, 18, 0, 8,  7, 9,  6, 10, 5,
                                          11, 4,  12, 3, 13, 2, 14, 1, 15};
            std::vector<int> cl(19, 0);
            for (int i = 0; i < hclen; ++i) cl[order[i]] = static_cast<int>(br.bits(3));
            Huffman clh(cl);
            std::vector<int> lengths;
            lengths.reserve(hlit + hdist);
            while (static_cast<int>(lengths.size()) < hlit + hdist) {
                const int sym = clh.decode(br);
                if (sym < 16) {
                    lengths.push_back(sym);
                } else if (sym == 16) {
                    if (lengths.empty()) throw FramingError("deflate: repeat with no previous");
                    const int rep = 3 + static_cast<int>(br.bits(2));
                    for (int i = 0; i < rep; ++i) lengths.push_back(lengths.back());
                } else if (sym == 17) {
                    const int rep = 3 + static_cast<int>(br.bits(3));
                    lengths.insert(lengths.end(), rep, 0);
                } else {
                    const int rep = 11 + static_cast<int>(br.bits(7));
                    lengths.insert(lengths.end(), rep, 0);
                }
            }
            if (static_cast<int>(lengths.size()) != hlit + hdist)
                throw FramingError("deflate: code length overrun");
            Huffman lit(std::vector<int>(lengths.begin(), lengths.begin() + hlit));
            Huffman dist(std::vector<int>(lengths.begin() + hlit, lengths.end()));
            inflate_block(br, lit, dist, out);
        } else {
            throw FramingError("deflate: reserved block type");
        }
        if (bfinal) break;
    }
    return out;
}

// ------------------------------------------------------------------- PNG ---

namespace {

uint32_t be32(const uint8_t* p) {
    return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | p[3];
}

void push_be32(std::vector<uint8_t>& v, uint32_t x) {
    v.push_back(static_cast<uint8_t>(x >> 24));
    v.push_back(static_cast<uint8_t>(x >> 16));
    v.push_back(static_cast<uint8_t>(x >> 8));
    v.push_back(static_cast<uint8_t>(x));
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

const uint8_t kPngSig[8] = {137, 80, 78, 71, 13, 10, 26, 10};

}  // namespace

ImageSample read_png(const std::string& path) {
    std::vector<uint8_t> bytes = read_file(path);
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSig, 8) != 0)
        throw FramingError(path + ": not a PNG");
    size_t pos = 8;
    int w = 0, h = 0, depth = 0, ctype = 0;
    std::vector<uint8_t> idat;
    std::vector<uint8_t> palette;
    bool saw_end = false;
    while (pos + 8 <= bytes.size() && !saw_end) {
        const uint32_t len = be32(&bytes[pos]);
        if (pos + 12 + len > bytes.size()) throw FramingError(path + ": truncated chunk");
        const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
        const uint8_t* data = &bytes[pos + 8];
        if (!std::memcmp(type, "IHDR", 4)) {
            if (len != 13) throw FramingError(path + ": bad IHDR");
            w = static_cast<int>(be32(data));
            h = static_cast<int>(be32(data + 4));
            depth = data[8];
            ctype = data[9];
            if (data[12] != 0) throw FramingError(path + ": interlaced PNG unsupported");
            if (depth != 8) throw FramingError(path + ": only 8-bit PNGs supported");
        } else if (!std::memcmp(type, "PLTE", 4)) {
            palette.assign(data, data + len);
        } else if (!std::memcmp(type, "IDAT", 4)) {
            idat.insert(idat.end(), data, data + len);
        } else if (!std::memcmp(type, "IEND", 4)) {
            saw_end = true;
        }
        pos += 12 + len;
    }
    if (w <= 0 || h <= 0 || idat.size() < 6) throw FramingError(path + ": missing image data");

    // zlib wrapper: 2-byte header, deflate body, adler32 trailer
    if ((idat[0] & 0x0f) != 8) throw FramingError(path + ": unsupported zlib method");
    std::vector<uint8_t> raw = inflate(idat.data() + 2, idat.size() - 6);
    const uint32_t want_adler = be32(&idat[idat.size() - 4]);
    if (adler32(raw.data(), raw.size()) != want_adler)
        throw FramingError(path + ": zlib checksum mismatch");

    int channels;
    switch (ctype) {
        case 0: channels = 1; break;
        case 2: channels = 3; break;
        case 3: channels = 1; break;
        case 4: channels = 2; break;
        case 6: channels = 4; break;
        default: throw FramingError(path + ": unsupported color type");
    }
    const size_t stride = static_cast<size_t>(w) * channels;
    if (raw.size() != (stride + 1) * static_cast<size_t>(h))
        throw FramingError(path + ": decompressed size mismatch");

    // undo per-scanline filters in place
    std::vector<uint8_t> img(stride * h);
    for (int y = 0; y < h; ++y) {
        const uint8_t filter = raw[(stride + 1) * y];
        const uint8_t* src = &raw[(stride + 1) * y + 1];
        uint8_t* dst = &img[stride * y];
        const uint8_t* prev = y > 0 ? &img[stride * (y - 1)] : nullptr;
        for (size_t i = 0; i < stride; ++i) {
            const int a = i >= static_cast<size_t>(channels) ? dst[i - channels] : 0;
            const int b = prev ? prev[i] : 0;
            const int c = (prev && i >= static_cast<size_t>(channels)) ? prev[i - channels] : 0;
            int v = src[i];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (a + b) / 2; break;
                case 4: v += paeth(a, b, c); break;
                default: throw FramingError(path + ": bad scanline filter");
            }
            dst[i] = static_cast<uint8_t>(v);
        }
    }

    ImageSample out{Tensor(Shape{3, h, w}), path};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const uint8_t* px = &img[stride * y + static_cast<size_t>(x) * channels];
            double r, g, b;
            if (ctype == 2 || ctype == 6) {
                r = byte_to_unit(px[0]);
                g = byte_to_unit(px[1]);
                b = byte_to_unit(px[2]);
            } else if (ctype == 3) {
                const size_t pi = static_cast<size_t>(px[0]) * 3;
                if (pi + 2 >= palette.size()) throw FramingError(path + ": palette index range");
                r = byte_to_unit(palette[pi]);
                g = byte_to_unit(palette[pi + 1]);
                b = byte_to_unit(palette[pi + 2]);
            } else {
                r = g = b = byte_to_unit(px[0]);
            }
            const size_t base = static_cast<size_t>(y) * w + x;
            out.pixels[base] = r;
            out.pixels[static_cast<size_t>(h) * w + base] = g;
            out.pixels[2 * static_cast<size_t>(h) * w + base] = b;
        }
    return out;
}

void write_png(const ImageSample& img, const std::string& path) {
    const int h = img.height(), w = img.width();
    // raw scanlines, filter 0
    std::vector<uint8_t> raw;
    raw.reserve(static_cast<size_t>(h) * (static_cast<size_t>(w) * 3 + 1));
    for (int y = 0; y < h; ++y) {
        raw.push_back(0);
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                raw.push_back(unit_to_byte(img.pixels[(static_cast<size_t>(c) * h + y) * w + x]));
    }
    // zlib stream with stored deflate blocks
    std::vector<uint8_t> z{0x78, 0x01};
    size_t off = 0;
    while (off < raw.size()) {
        const size_t n = std::min<size_t>(65535, raw.size() - off);
        z.push_back(off + n == raw.size() ? 1 : 0);
        z.push_back(static_cast<uint8_t>(n & 0xff));
        z.push_back(static_cast<uint8_t>(n >> 8));
        z.push_back(static_cast<uint8_t>(~n & 0xff));
        z.push_back(static_cast<uint8_t>((~n >> 8) & 0xff));
        z.insert(z.end(), raw.begin() + off, raw.begin() + off + n);
        off += n;
    }
    push_be32(z, adler32(raw.data(), raw.size()));

    std::vector<uint8_t> out(kPngSig, kPngSig + 8);
    auto chunk = [&](const char* type, const std::vector<uint8_t>& data) {
        push_be32(out, static_cast<uint32_t>(data.size()));
        std::vector<uint8_t> body(type, type + 4);
        body.insert(body.end(), data.begin(), data.end());
        out.insert(out.end(), body.begin(), body.end());
        push_be32(out, crc32(body.data(), body.size()));
    };
    std::vector<uint8_t> ihdr;
    push_be32(ihdr, static_cast<uint32_t>(w));
    push_be32(ihdr, static_cast<uint32_t>(h));
    ihdr.push_back(8);
    ihdr.push_back(2);
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    chunk("IHDR", ihdr);
    chunk("IDAT", z);
    chunk("IEND", {});
    write_file(path, out);
}

ImageSample read_image(const std::string& path) {
    std::vector<uint8_t> head = read_file(path);
    if (head.size() >= 8 && !std::memcmp(head.data(), kPngSig, 8)) return read_png(path);
    return read_ppm(path);
}

void write_image(const ImageSample& img, const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".png")
        write_png(img, path);
    else
        write_ppm(img, path);
}

// --------------------------------------------------------- resize / crop ---

ImageSample crop_resize(const ImageSample& img, int size) {
    const int h = img.height(), w = img.width();
    if (h < 1 || w < 1) throw DimensionError("crop_resize: empty image");
    // scale so the short side equals `size`, then center-crop
    const double s = static_cast<double>(size) / std::min(h, w);
    const int rh = std::max(size, static_cast<int>(std::lround(h * s)));
    const int rw = std::max(size, static_cast<int>(std::lround(w * s)));
    Tensor resized(Shape{3, rh, rw});
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < rh; ++y)
            for (int x = 0; x < rw; ++x) {
                const double sy = (y + 0.5) * h / rh - 0.5;
                const double sx = (x + 0.5) * w / rw - 0.5;
                const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, h - 1);
                const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, w - 1);
                const int y1 = std::min(y0 + 1, h - 1);
                const int x1 = std::min(x0 + 1, w - 1);
                const double fy = std::clamp(sy - y0, 0.0, 1.0);
                const double fx = std::clamp(sx - x0, 0.0, 1.0);
                auto at = [&](int yy, int xx) {
                    return img.pixels[(static_cast<size_t>(c) * h + yy) * w + xx];
                };
                resized[(static_cast<size_t>(c) * rh + y) * rw + x] =
                    (1 - fy) * ((1 - fx) * at(y0, x0) + fx * at(y0, x1)) +
                    fy * ((1 - fx) * at(y1, x0) + fx * at(y1, x1));
            }
    const int oy = (rh - size) / 2, ox = (rw - size) / 2;
    ImageSample out{Tensor(Shape{3, size, size}), img.source};
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x)
                out.pixels[(static_cast<size_t>(c) * size + y) * size + x] =
                    resized[(static_cast<size_t>(c) * rh + y + oy) * rw + x + ox];
    return out;
}

// -------------------------------------------------------------- textures ---

ImageSample generate_texture(int size, uint64_t seed) {
    Rng rng(seed);
    const int n = size;
    Tensor px(Shape{3, n, n});

    // shared sinusoid field with per-channel mixing
    const int waves = 4 + static_cast<int>(rng.next_below(4));
    std::vector<double> fx(waves), fy(waves), ph(waves), amp(waves);
    for (int k = 0; k < waves; ++k) {
        fx[k] = rng.uniform(0.5, 4.5);
        fy[k] = rng.uniform(0.5, 4.5);
        ph[k] = rng.uniform(0.0, 6.2831853);
        amp[k] = rng.uniform(0.1, 0.5) / (1.0 + 0.3 * k);
    }
    double chan_mix[3][2];
    for (auto& m : chan_mix) {
        m[0] = rng.uniform(0.4, 1.0);
        m[1] = rng.uniform(-0.3, 0.3);
    }
    const double gx = rng.uniform(-0.4, 0.4), gy = rng.uniform(-0.4, 0.4);
    double base[3];
    for (double& b : base) b = rng.uniform(0.3, 0.7);

    // soft shapes
    const int shapes = 1 + static_cast<int>(rng.next_below(3));
    std::vector<double> scx(shapes), scy(shapes), srad(shapes), scol(shapes * 3), salpha(shapes);
    for (int s = 0; s < shapes; ++s) {
        scx[s] = rng.uniform(0.15, 0.85);
        scy[s] = rng.uniform(0.15, 0.85);
        srad[s] = rng.uniform(0.08, 0.3);
        salpha[s] = rng.uniform(0.3, 0.7);
        for (int c = 0; c < 3; ++c) scol[s * 3 + c] = rng.uniform(0.1, 0.9);
    }

    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            const double u = static_cast<double>(x) / n, v = static_cast<double>(y) / n;
            double field = 0.0, field2 = 0.0;
            for (int k = 0; k < waves; ++k) {
                const double a = 6.2831853 * (fx[k] * u + fy[k] * v) + ph[k];
                field += amp[k] * std::cos(a);
                field2 += amp[k] * std::sin(1.7 * a);
            }
            for (int c = 0; c < 3; ++c) {
                double val = base[c] + gx * (u - 0.5) + gy * (v - 0.5) +
                             chan_mix[c][0] * field * 0.5 + chan_mix[c][1] * field2 * 0.5;
                for (int s = 0; s < shapes; ++s) {
                    const double d = std::hypot(u - scx[s], v - scy[s]);
                    const double t = 1.0 / (1.0 + std::exp((d - srad[s]) * 40.0));
                    val = (1.0 - salpha[s] * t) * val + salpha[s] * t * scol[s * 3 + c];
                }
                px[(static_cast<size_t>(c) * n + y) * n + x] = 0.5 + 0.47 * std::tanh(2.0 * (val - 0.5));
            }
        }
    return ImageSample{std::move(px), "texture:" + std::to_string(seed)};
}

std::vector<ImageSample> generate_textures(int count, int size, uint64_t seed) {
    std::vector<ImageSample> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i)
        out.push_back(generate_texture(size, derive_seed(seed, 0x7e47, i)));
    return out;
}

// ---------------------------------------------------------------- loader ---

std::vector<ImageSample> load_dataset(const std::string& directory, int target_size) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory)) throw ConfigError("dataset: not a directory: " + directory);
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(directory)) {
        if (!e.is_regular_file()) continue;
        const std::string ext = e.path().extension().string();
        if (ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".PNG" || ext == ".PPM")
            files.push_back(e.path().string());
    }
    std::sort(files.begin(), files.end());
    std::vector<ImageSample> out;
    for (const auto& f : files) {
        try {
            out.push_back(crop_resize(read_image(f), target_size));
        } catch (const Error& e) {
            std::fprintf(stderr, "warning: skipping %s (%s)\n", f.c_str(), e.what());
        }
    }
    if (out.empty()) throw ConfigError("dataset: no readable images in " + directory);
    return out;
}

}  // namespace hdasc
