#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>

#include "helpers.hpp"
#include "mmreg/image_io.hpp"
#include "mmreg/pyramid.hpp"

using namespace mmreg;
using test_helpers::TempDir;

TEST_CASE("load_image maps 8-bit gray by type maximum") {
    TempDir dir;
    test_helpers::write_png8_gray({255, 0, 128, 64}, 2, 2, dir.file("g8.png"));
    const ImageGrid img = load_image(dir.file("g8.png"));
    REQUIRE(img.width == 2);
    REQUIRE(img.height == 2);
    CHECK(img(0, 0) == 1.0f);
    CHECK(img(1, 0) == 0.0f);
    CHECK(img(0, 1) == Catch::Approx(128.0 / 255.0).margin(1e-7));
}

TEST_CASE("load_image reduces RGB to luma with unit-sum weights") {
    TempDir dir;
    // one white pixel, one pure red
    test_helpers::write_png8_rgb({255, 255, 255, 255, 0, 0}, 2, 1, dir.file("rgb.png"));
    const ImageGrid img = load_image(dir.file("rgb.png"));
    CHECK(img(0, 0) == Catch::Approx(1.0).margin(1e-6));
    CHECK(img(1, 0) == Catch::Approx(0.299).margin(1e-6));
}

TEST_CASE("load_image reads 16-bit and RGB TIFF") {
    TempDir dir;
    test_helpers::write_tiff16_gray({65535, 0, 32768, 1000}, 2, 2, dir.file("g16.tif"));
    const ImageGrid img = load_image(dir.file("g16.tif"));
    CHECK(img(0, 0) == 1.0f);
    CHECK(img(1, 0) == 0.0f);
    CHECK(img(0, 1) == Catch::Approx(32768.0 / 65535.0).margin(1e-7));

    test_helpers::write_tiff8_rgb({255, 255, 255, 0, 255, 0}, 2, 1, dir.file("rgb.tif"));
    const ImageGrid rgb = load_image(dir.file("rgb.tif"));
    CHECK(rgb(0, 0) == Catch::Approx(1.0).margin(1e-6));
    CHECK(rgb(1, 0) == Catch::Approx(0.587).margin(1e-6));
}

TEST_CASE("load_image error paths") {
    TempDir dir;
    CHECK_THROWS_AS(load_image(dir.file("missing.png")), IoError);

    // fake JPEG magic: the error must name the detected format
    std::ofstream out(dir.file("fake.jpg"), std::ios::binary);
    const unsigned char jpeg_magic[] = {0xFF, 0xD8, 0xFF, 0xE0, 0x00, 0x10};
    out.write(reinterpret_cast<const char*>(jpeg_magic), sizeof(jpeg_magic));
    out.close();
    CHECK_THROWS_WITH(load_image(dir.file("fake.jpg")),
                      Catch::Matchers::ContainsSubstring("JPEG"));
    CHECK_THROWS_AS(load_image(dir.file("fake.jpg")), FormatError);
}

TEST_CASE("16-bit PNG round-trip is bit-exact for quantized data") {
    TempDir dir;
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> level(0, 65535);
    ImageGrid img(17, 11);
    for (float& v : img.data) v = static_cast<float>(level(rng) / 65535.0);
    save_png16(img, dir.file("rt.png"));
    const ImageGrid back = load_image(dir.file("rt.png"));
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) REQUIRE(back.data[i] == img.data[i]);
}

TEST_CASE("preprocess stretches to [0,1]") {
    ImageGrid img(3, 1);
    img.data = {0.2f, 0.4f, 0.6f};
    const ImageGrid out = preprocess(img);
    CHECK(out.data[0] == Catch::Approx(0.0));
    CHECK(out.data[1] == Catch::Approx(0.5));
    CHECK(out.data[2] == Catch::Approx(1.0));
}

TEST_CASE("preprocess maps constant images to zero") {
    ImageGrid img(4, 4, 0.7f);
    const ImageGrid out = preprocess(img);
    for (float v : out.data) CHECK(v == 0.0f);
}

TEST_CASE("preprocess keeps an already stretched image") {
    ImageGrid img(2, 2);
    img.data = {0.0f, 1.0f, 0.25f, 0.75f};
    const ImageGrid out = preprocess(img);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        CHECK(out.data[i] == Catch::Approx(img.data[i]).margin(1e-7));
}

TEST_CASE("preprocess is idempotent") {
    const ImageGrid img = test_helpers::make_noise_image(23, 31, 5);
    const ImageGrid once = preprocess(img);
    const ImageGrid twice = preprocess(once);
    for (std::size_t i = 0; i < once.data.size(); ++i)
        CHECK(std::abs(once.data[i] - twice.data[i]) < 1e-6f);
}

TEST_CASE("build_pyramid with one level returns the input") {
    const ImageGrid img = test_helpers::make_noise_image(40, 40, 1);
    const Pyramid pyr = build_pyramid(img, 1, 2.0, 1.0);
    REQUIRE(pyr.levels.size() == 1);
    CHECK(pyr.levels[0].data == img.data);
}

TEST_CASE("build_pyramid level dimensions follow the floor formula") {
    const ImageGrid img = test_helpers::make_noise_image(512, 512, 2);
    const Pyramid pyr = build_pyramid(img, 3, 2.0, 1.0);
    REQUIRE(pyr.levels.size() == 3);
    CHECK(pyr.levels[1].width == 256);
    CHECK(pyr.levels[1].height == 256);
    CHECK(pyr.levels[2].width == 128);

    // generic check across sizes and factors
    for (auto [w, h, factor, n] :
         {std::tuple{100, 90, 1.5, 4}, {333, 200, 2.0, 4}, {64, 64, 3.0, 3}}) {
        const ImageGrid base = test_helpers::make_noise_image(w, h, 3);
        const Pyramid p = build_pyramid(base, n, factor, 1.0);
        for (std::size_t k = 0; k < p.levels.size(); ++k) {
            const double denom = std::pow(factor, static_cast<double>(k));
            CHECK(p.levels[k].width == static_cast<int>(std::floor(w / denom)));
            CHECK(p.levels[k].height == static_cast<int>(std::floor(h / denom)));
            CHECK(p.levels[k].width >= 32);
            CHECK(p.levels[k].height >= 32);
        }
    }
}

TEST_CASE("build_pyramid truncates levels below 32 px") {
    const ImageGrid img = test_helpers::make_noise_image(70, 70, 4);
    const Pyramid pyr = build_pyramid(img, 3, 2.0, 1.0);
    REQUIRE(pyr.levels.size() == 2);  // 70 -> 35 kept, 17 rejected
    CHECK(pyr.levels[1].width == 35);
    CHECK(pyr.requested_levels == 3);
}
