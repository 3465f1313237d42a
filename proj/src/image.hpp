#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tensor.hpp"

namespace hdasc {

// RGB image with pixels in [0,1], stored as a [3,H,W] tensor.
struct ImageSample {
    Tensor pixels;
    std::string source;

    int height() const { return pixels.dim(1); }
    int width() const { return pixels.dim(2); }
};

ImageSample read_ppm(const std::string& path);
void write_ppm(const ImageSample& img, const std::string& path);

// 8-bit non-interlaced PNG (gray, gray+alpha, palette, RGB, RGBA).
ImageSample read_png(const std::string& path);
// RGB8 output; deflate stream uses stored blocks.
void write_png(const ImageSample& img, const std::string& path);

ImageSample read_image(const std::string& path);
void write_image(const ImageSample& img, const std::string& path);

// Raw DEFLATE decompressor (stored, fixed and dynamic Huffman blocks).
std::vector<uint8_t> inflate(const uint8_t* data, size_t size);

uint32_t crc32(const uint8_t* data, size_t size, uint32_t seed = 0);
uint32_t adler32(const uint8_t* data, size_t size);

// Bilinear resize followed by center crop to exactly (size x size).
ImageSample crop_resize(const ImageSample& img, int size);

// Deterministic procedural training textures: smooth gradients, sinusoid
// mixtures and soft shapes, all within [0,1].
ImageSample generate_texture(int size, uint64_t seed);
std::vector<ImageSample> generate_textures(int count, int size, uint64_t seed);

// Loads every readable PNG/PPM/PGM in `directory` (sorted by filename),
// cropped/resized to target_size. Unreadable files are skipped with a warning
// on stderr; an empty result is an error.
std::vector<ImageSample> load_dataset(const std::string& directory, int target_size);

}  // namespace hdasc
