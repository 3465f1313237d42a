#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "image.hpp"

using namespace hdasc;

namespace {

std::string temp_dir() {
    auto p = std::filesystem::temp_directory_path() / "hdasc_img_test";
    std::filesystem::create_directories(p);
    return p.string();
}

}  // namespace

TEST_CASE("ppm round-trip preserves 8-bit pixels") {
    ImageSample img = generate_texture(16, 99);
    const std::string path = temp_dir() + "/rt.ppm";
    write_ppm(img, path);
    ImageSample back = read_ppm(path);
    REQUIRE(back.pixels.same_shape(img.pixels));
    for (size_t i = 0; i < img.pixels.numel(); ++i) {
        const double q = std::lround(std::clamp(img.pixels[i], 0.0, 1.0) * 255.0) / 255.0;
        CHECK(back.pixels[i] == doctest::Approx(q).epsilon(1e-12));
    }
}

TEST_CASE("png reader decodes zlib-compressed fixture exactly") {
    const std::string dir = HDASC_TEST_DATA_DIR;
    ImageSample img = read_png(dir + "/pattern_rgb_16.png");
    std::ifstream exp(dir + "/pattern_rgb_16.expected.txt");
    REQUIRE(exp.good());
    int w, h;
    exp >> w >> h;
    REQUIRE(img.width() == w);
    REQUIRE(img.height() == h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int r, g, b;
            exp >> r >> g >> b;
            const size_t base = static_cast<size_t>(y) * w + x;
            CHECK(img.pixels[base] == doctest::Approx(r / 255.0).epsilon(1e-12));
            CHECK(img.pixels[static_cast<size_t>(h) * w + base] ==
                  doctest::Approx(g / 255.0).epsilon(1e-12));
            CHECK(img.pixels[2 * static_cast<size_t>(h) * w + base] ==
                  doctest::Approx(b / 255.0).epsilon(1e-12));
        }
}

TEST_CASE("png write-read round-trip (stored deflate path)") {
    ImageSample img = generate_texture(24, 123);
    const std::string path = temp_dir() + "/rt.png";
    write_png(img, path);
    ImageSample back = read_png(path);
    REQUIRE(back.height() == 24);
    for (size_t i = 0; i < img.pixels.numel(); ++i) {
        const double q = std::lround(std::clamp(img.pixels[i], 0.0, 1.0) * 255.0) / 255.0;
        CHECK(back.pixels[i] == doctest::Approx(q).epsilon(1e-12));
    }
}

TEST_CASE("inflate rejects corrupt streams instead of crashing") {
    std::vector<uint8_t> junk{0x07, 0xff, 0x13, 0x37, 0x00};
    CHECK_THROWS_AS(inflate(junk.data(), junk.size()), FramingError);
}

TEST_CASE("textures satisfy pixel-range invariant and are deterministic") {
    auto set = generate_textures(100, 16, 42);
    REQUIRE(set.size() == 100);
    for (const auto& img : set) {
        for (size_t i = 0; i < img.pixels.numel(); ++i) {
            CHECK(img.pixels[i] >= 0.0);
            CHECK(img.pixels[i] <= 1.0);
        }
    }
    auto again = generate_textures(3, 16, 42);
    for (int k = 0; k < 3; ++k)
        for (size_t i = 0; i < set[k].pixels.numel(); ++i)
            CHECK(set[k].pixels[i] == again[k].pixels[i]);
}

TEST_CASE("load_dataset ordering, skipping, empty-directory error") {
    const std::string dir = temp_dir() + "/ds";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    CHECK_THROWS_AS(load_dataset(dir, 16), ConfigError);

    write_ppm(generate_texture(20, 1), dir + "/b.ppm");
    write_ppm(generate_texture(32, 2), dir + "/a.ppm");
    {
        std::ofstream bad(dir + "/c.ppm");
        bad << "not an image";
    }
    auto ds = load_dataset(dir, 16);
    REQUIRE(ds.size() == 2);  // c.ppm skipped with a warning
    CHECK(ds[0].source.find("a.ppm") != std::string::npos);
    CHECK(ds[1].source.find("b.ppm") != std::string::npos);
    CHECK(ds[0].height() == 16);
    CHECK(ds[0].width() == 16);

    auto ds2 = load_dataset(dir, 16);
    for (size_t k = 0; k < ds.size(); ++k) {
        CHECK(ds2[k].source == ds[k].source);
        for (size_t i = 0; i < ds[k].pixels.numel(); ++i)
            CHECK(ds2[k].pixels[i] == ds[k].pixels[i]);
    }
}

TEST_CASE("crop_resize produces exact target and stays in range") {
    ImageSample img = generate_texture(50, 7);
    ImageSample out = crop_resize(img, 32);
    CHECK(out.height() == 32);
    CHECK(out.width() == 32);
    for (size_t i = 0; i < out.pixels.numel(); ++i) {
        CHECK(out.pixels[i] >= 0.0);
        CHECK(out.pixels[i] <= 1.0);
    }
}
