#include "checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <unordered_map>

namespace hdasc {

namespace {

constexpr uint32_t kMagic = 0x48444135u;
constexpr uint16_t kVersion = 1;

void put_u16(std::vector<uint8_t>& v, uint16_t x) {
    v.push_back(static_cast<uint8_t>(x));
    v.push_back(static_cast<uint8_t>(x >> 8));
}

void put_u32(std::vector<uint8_t>& v, uint32_t x) {
    for (int i = 0; i < 4; ++i) v.push_back(static_cast<uint8_t>(x >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& v, uint64_t x) {
    for (int i = 0; i < 8; ++i) v.push_back(static_cast<uint8_t>(x >> (8 * i)));
}

struct Reader {
    const std::vector<uint8_t>& buf;
    size_t pos = 0;

    void need(size_t n) const {
        if (pos + n > buf.size()) throw CheckpointError("checkpoint truncated");
    }
    uint8_t u8() {
        need(1);
        return buf[pos++];
    }
    uint16_t u16() {
        need(2);
        uint16_t v = static_cast<uint16_t>(buf[pos] | (buf[pos + 1] << 8));
        pos += 2;
        return v;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(buf[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    std::string str(size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(&buf[pos]), n);
        pos += n;
        return s;
    }
};

uint8_t trained_flags(const Model& m) {
    return static_cast<uint8_t>((m.semantic_trained ? 1 : 0) | (m.transceiver_trained ? 2 : 0) |
                                (m.predictor_trained ? 4 : 0) | (m.onestep_trained ? 8 : 0));
}

}  // namespace

void save_checkpoint(Model& model, const std::string& path) {
    std::vector<uint8_t> head;
    put_u32(head, kMagic);
    put_u16(head, kVersion);
    head.push_back(trained_flags(model));

    const std::string cfg_text = model.cfg.serialize();
    put_u32(head, static_cast<uint32_t>(cfg_text.size()));
    head.insert(head.end(), cfg_text.begin(), cfg_text.end());

    auto groups = model.groups();
    std::vector<uint8_t> manifest, payload;
    uint32_t entries = 0;
    for (auto& [gname, params] : groups) {
        for (auto& p : params) {
            ++entries;
            put_u16(manifest, static_cast<uint16_t>(p.name.size()));
            manifest.insert(manifest.end(), p.name.begin(), p.name.end());
            const Tensor& t = p.var.value();
            manifest.push_back(static_cast<uint8_t>(t.rank()));
            for (size_t d = 0; d < t.rank(); ++d)
                put_u32(manifest, static_cast<uint32_t>(t.dim(d)));
            put_u64(manifest, payload.size());
            for (size_t i = 0; i < t.numel(); ++i) {
                const double v = t[i];
                uint64_t bits;
                std::memcpy(&bits, &v, 8);
                put_u64(payload, bits);
            }
        }
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw CheckpointError("cannot write checkpoint: " + path);
    out.write(reinterpret_cast<const char*>(head.data()), static_cast<std::streamsize>(head.size()));
    std::vector<uint8_t> count;
    put_u32(count, entries);
    out.write(reinterpret_cast<const char*>(count.data()), 4);
    out.write(reinterpret_cast<const char*>(manifest.data()),
              static_cast<std::streamsize>(manifest.size()));
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    if (!out) throw CheckpointError("short write on checkpoint: " + path);
}

Model load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint: " + path);
    std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
    Reader r{buf};
    if (r.u32() != kMagic) throw CheckpointError("bad checkpoint magic");
    const uint16_t version = r.u16();
    if (version != kVersion)
        throw CheckpointError("incompatible checkpoint version " + std::to_string(version));
    const uint8_t flags = r.u8();
    const uint32_t cfg_len = r.u32();
    RunConfig cfg;
    cfg.apply_text(r.str(cfg_len));
    Model model = Model::init(cfg);
    model.semantic_trained = flags & 1;
    model.transceiver_trained = flags & 2;
    model.predictor_trained = flags & 4;
    model.onestep_trained = flags & 8;

    struct Entry {
        Shape shape;
        uint64_t offset;
    };
    std::unordered_map<std::string, Entry> entries;
    const uint32_t count = r.u32();
    for (uint32_t i = 0; i < count; ++i) {
        const uint16_t nlen = r.u16();
        const std::string name = r.str(nlen);
        const uint8_t ndim = r.u8();
        Shape shape;
        for (int d = 0; d < ndim; ++d) shape.push_back(static_cast<int>(r.u32()));
        const uint64_t offset = r.u64();
        entries[name] = {std::move(shape), offset};
    }
    const size_t payload_start = r.pos;

    for (auto& [gname, params] : model.groups()) {
        for (auto& p : params) {
            auto it = entries.find(p.name);
            if (it == entries.end())
                throw CheckpointError("missing parameter group entry: " + p.name + " (group " +
                                      gname + ")");
            Tensor& t = p.var.value_mut();
            if (it->second.shape != t.shape())
                throw CheckpointError("parameter shape mismatch for " + p.name);
            const size_t off = payload_start + it->second.offset;
            if (off + 8 * t.numel() > buf.size()) throw CheckpointError("checkpoint truncated");
            for (size_t i = 0; i < t.numel(); ++i) {
                uint64_t bits = 0;
                for (int b = 0; b < 8; ++b)
                    bits |= static_cast<uint64_t>(buf[off + 8 * i + b]) << (8 * b);
                std::memcpy(&t[i], &bits, 8);
            }
            entries.erase(it);
        }
    }
    if (!entries.empty())
        throw CheckpointError("checkpoint contains unknown parameter: " + entries.begin()->first);
    return model;
}

}  // namespace hdasc
