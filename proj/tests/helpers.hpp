#pragma once

#include <png.h>
#include <tiffio.h>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mmreg/grid.hpp"
#include "mmreg/imgproc.hpp"

namespace test_helpers {

using mmreg::Field;
using mmreg::ImageGrid;

/// Self-deleting scratch directory.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static std::atomic<int> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("mmreg_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

/// Deterministic structured test image: smooth gradient background, random
/// rectangles and ellipses, light smoothed noise. Stands in for a natural
/// image at desk scale.
inline ImageGrid make_structured_image(int w, int h, std::uint64_t seed, int n_shapes = 40) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Field img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img(x, y) = 0.3 * x / w + 0.2 * y / h;

    for (int i = 0; i < n_shapes; ++i) {
        const double cx = 30 + unif(rng) * (w - 60);
        const double cy = 30 + unif(rng) * (h - 60);
        const double sw = 10 + unif(rng) * 70;
        const double sh = 10 + unif(rng) * 70;
        const double val = unif(rng) - 0.5;
        const double ang = unif(rng) * 3.14159265358979;
        const double ca = std::cos(ang), sa = std::sin(ang);
        const bool rect = i % 2 == 0;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double dx = x - cx, dy = y - cy;
                const double u = ca * dx + sa * dy, v = -sa * dx + ca * dy;
                const bool inside = rect ? (std::abs(u) < sw / 2 && std::abs(v) < sh / 2)
                                         : (u * u / (sw * sw / 4) + v * v / (sh * sh / 4) < 1.0);
                if (inside) img(x, y) += val;
            }
        }
    }

    Field noise(w, h);
    for (double& v : noise.data) v = unif(rng) - 0.5;
    noise = mmreg::gaussian_blur(noise, 3.0, mmreg::Border::replicate);
    for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] += 0.6 * noise.data[i];

    auto [lo, hi] = mmreg::min_max(img);
    ImageGrid out(w, h);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = static_cast<float>((img.data[i] - lo) / (hi - lo));
    return out;
}

inline ImageGrid make_noise_image(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> unif(0.0f, 1.0f);
    ImageGrid out(w, h);
    for (float& v : out.data) v = unif(rng);
    return out;
}

// ---- fixture writers (test-only formats the library does not emit) ----

inline void write_png8_gray(const std::vector<std::uint8_t>& pixels, int w, int h,
                            const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    png_init_io(png, fp);
    png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < h; ++y)
        png_write_row(png, const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * w));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

inline void write_png8_rgb(const std::vector<std::uint8_t>& pixels, int w, int h,
                           const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    png_init_io(png, fp);
    png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < h; ++y)
        png_write_row(png, const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * w * 3));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

inline void write_tiff16_gray(const std::vector<std::uint16_t>& pixels, int w, int h,
                              const std::string& path) {
    TIFF* tif = TIFFOpen(path.c_str(), "w");
    TIFFSetField(tif, TIFFTAG_IMAGEWIDTH, w);
    TIFFSetField(tif, TIFFTAG_IMAGELENGTH, h);
    TIFFSetField(tif, TIFFTAG_BITSPERSAMPLE, 16);
    TIFFSetField(tif, TIFFTAG_SAMPLESPERPIXEL, 1);
    TIFFSetField(tif, TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
    TIFFSetField(tif, TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    for (int y = 0; y < h; ++y)
        TIFFWriteScanline(tif, const_cast<std::uint16_t*>(pixels.data() + static_cast<std::size_t>(y) * w), y);
    TIFFClose(tif);
}

inline void write_tiff8_rgb(const std::vector<std::uint8_t>& pixels, int w, int h,
                            const std::string& path) {
    TIFF* tif = TIFFOpen(path.c_str(), "w");
    TIFFSetField(tif, TIFFTAG_IMAGEWIDTH, w);
    TIFFSetField(tif, TIFFTAG_IMAGELENGTH, h);
    TIFFSetField(tif, TIFFTAG_BITSPERSAMPLE, 8);
    TIFFSetField(tif, TIFFTAG_SAMPLESPERPIXEL, 3);
    TIFFSetField(tif, TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_RGB);
    TIFFSetField(tif, TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    for (int y = 0; y < h; ++y)
        TIFFWriteScanline(tif, const_cast<std::uint8_t*>(pixels.data() + static_cast<std::size_t>(y) * w * 3), y);
    TIFFClose(tif);
}

}  // namespace test_helpers
