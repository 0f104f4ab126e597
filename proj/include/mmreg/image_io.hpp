#pragma once

#include <png.h>
#include <tiffio.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "mmreg/errors.hpp"
#include "mmreg/grid.hpp"

namespace mmreg {

// Fixed luma weights for 3-channel inputs.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

namespace detail {

inline std::string sniff_format(const unsigned char* magic, std::size_t n) {
    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (n >= 8 && std::memcmp(magic, png_sig, 8) == 0) return "PNG";
    if (n >= 4 && (std::memcmp(magic, "II*\0", 4) == 0 || std::memcmp(magic, "MM\0*", 4) == 0)) return "TIFF";
    if (n >= 3 && magic[0] == 0xFF && magic[1] == 0xD8 && magic[2] == 0xFF) return "JPEG";
    if (n >= 4 && std::memcmp(magic, "GIF8", 4) == 0) return "GIF";
    if (n >= 2 && std::memcmp(magic, "BM", 2) == 0) return "BMP";
    return "unknown";
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline ImageGrid load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng init failed for: " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode PNG: " + path);
    }
    png_init_io(png, fp.get());
    // Expand palettes / sub-byte grays, drop alpha, fix 16-bit byte order.
    png_read_png(png, info,
                 PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_STRIP_ALPHA | PNG_TRANSFORM_PACKING |
                     PNG_TRANSFORM_SWAP_ENDIAN,
                 nullptr);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int bit_depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);
    png_bytepp rows = png_get_rows(png, info);

    if ((bit_depth != 8 && bit_depth != 16) || (channels != 1 && channels != 3)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("unsupported PNG layout (" + std::to_string(bit_depth) + "-bit, " +
                          std::to_string(channels) + " channels): " + path);
    }

    ImageGrid out(width, height);
    const double denom = bit_depth == 8 ? 255.0 : 65535.0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double px[3] = {0, 0, 0};
            for (int c = 0; c < channels; ++c) {
                if (bit_depth == 8) {
                    px[c] = rows[y][x * channels + c] / denom;
                } else {
                    const std::uint16_t* row16 = reinterpret_cast<const std::uint16_t*>(rows[y]);
                    px[c] = row16[x * channels + c] / denom;
                }
            }
            out(x, y) = static_cast<float>(channels == 1 ? px[0]
                                                         : kLumaR * px[0] + kLumaG * px[1] + kLumaB * px[2]);
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

inline ImageGrid load_tiff(const std::string& path) {
    TIFFSetWarningHandler(nullptr);
    TIFF* tif = TIFFOpen(path.c_str(), "r");
    if (!tif) throw IoError("cannot open file: " + path);

    std::uint32_t width = 0, height = 0;
    std::uint16_t bps = 0, spp = 0, photometric = PHOTOMETRIC_MINISBLACK, planar = PLANARCONFIG_CONTIG;
    TIFFGetField(tif, TIFFTAG_IMAGEWIDTH, &width);
    TIFFGetField(tif, TIFFTAG_IMAGELENGTH, &height);
    TIFFGetFieldDefaulted(tif, TIFFTAG_BITSPERSAMPLE, &bps);
    TIFFGetFieldDefaulted(tif, TIFFTAG_SAMPLESPERPIXEL, &spp);
    TIFFGetFieldDefaulted(tif, TIFFTAG_PHOTOMETRIC, &photometric);
    TIFFGetFieldDefaulted(tif, TIFFTAG_PLANARCONFIG, &planar);

    auto fail = [&](const std::string& why) {
        TIFFClose(tif);
        throw FormatError("unsupported TIFF layout (" + why + "): " + path);
    };
    if (TIFFIsTiled(tif)) fail("tiled");
    if (bps != 8 && bps != 16) fail(std::to_string(bps) + "-bit");
    if (spp != 1 && spp != 3) fail(std::to_string(spp) + " channels");
    if (spp == 3 && planar != PLANARCONFIG_CONTIG) fail("planar RGB");
    if (photometric != PHOTOMETRIC_MINISBLACK && photometric != PHOTOMETRIC_MINISWHITE &&
        photometric != PHOTOMETRIC_RGB)
        fail("photometric " + std::to_string(photometric));

    ImageGrid out(static_cast<int>(width), static_cast<int>(height));
    const double denom = bps == 8 ? 255.0 : 65535.0;
    std::vector<std::uint8_t> buf(TIFFScanlineSize(tif));
    for (std::uint32_t y = 0; y < height; ++y) {
        if (TIFFReadScanline(tif, buf.data(), y) < 0) {
            TIFFClose(tif);
            throw IoError("failed to decode TIFF: " + path);
        }
        for (std::uint32_t x = 0; x < width; ++x) {
            double px[3] = {0, 0, 0};
            for (int c = 0; c < spp; ++c) {
                px[c] = bps == 8 ? buf[x * spp + c] / denom
                                 : reinterpret_cast<const std::uint16_t*>(buf.data())[x * spp + c] / denom;
            }
            double v = spp == 1 ? px[0] : kLumaR * px[0] + kLumaG * px[1] + kLumaB * px[2];
            if (photometric == PHOTOMETRIC_MINISWHITE) v = 1.0 - v;
            out(static_cast<int>(x), static_cast<int>(y)) = static_cast<float>(v);
        }
    }
    TIFFClose(tif);
    return out;
}

}  // namespace detail

/// Load a PNG or TIFF (8/16-bit, 1 or 3 channels) as a [0,1] grayscale grid.
/// The container is detected from the file magic, not the extension.
inline ImageGrid load_image(const std::string& path) {
    unsigned char magic[8] = {0};
    std::size_t got = 0;
    {
        detail::FilePtr fp(std::fopen(path.c_str(), "rb"));
        if (!fp) throw IoError("cannot open file: " + path);
        got = std::fread(magic, 1, sizeof(magic), fp.get());
    }
    const std::string fmt = detail::sniff_format(magic, got);
    if (fmt == "PNG") return detail::load_png(path);
    if (fmt == "TIFF") return detail::load_tiff(path);
    throw FormatError("unsupported image format " + fmt + " (need PNG or TIFF): " + path);
}

/// Write a [0,1] grid as 16-bit grayscale PNG (the internal dump format).
/// Values are clamped, then quantized with round-to-nearest.
inline void save_png16(const ImageGrid& img, const std::string& path) {
    detail::FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open file for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng init failed for: " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode PNG: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_set_swap(png);

    std::vector<std::uint16_t> row(img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double v = std::clamp(static_cast<double>(img(x, y)), 0.0, 1.0);
            row[x] = static_cast<std::uint16_t>(std::lrint(v * 65535.0));
        }
        png_write_row(png, reinterpret_cast<png_bytep>(row.data()));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

/// Write an 8-bit RGB PNG from three [0,1] planes of equal shape.
inline void save_png8_rgb(const ImageGrid& r, const ImageGrid& g, const ImageGrid& b,
                          const std::string& path) {
    if (!r.same_shape(g) || !r.same_shape(b)) throw ContractError("save_png8_rgb: plane shape mismatch");
    detail::FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open file for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng init failed for: " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode PNG: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, r.width, r.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<std::uint8_t> row(static_cast<std::size_t>(r.width) * 3);
    for (int y = 0; y < r.height; ++y) {
        for (int x = 0; x < r.width; ++x) {
            auto q = [](float v) {
                return static_cast<std::uint8_t>(std::lrint(std::clamp(static_cast<double>(v), 0.0, 1.0) * 255.0));
            };
            row[x * 3 + 0] = q(r(x, y));
            row[x * 3 + 1] = q(g(x, y));
            row[x * 3 + 2] = q(b(x, y));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

/// Debug dump: min-max stretch to the full 16-bit range, then save.
inline void save_png16_stretched(const ImageGrid& img, const std::string& path) {
    auto [lo, hi] = min_max(img);
    ImageGrid scaled(img.width, img.height);
    const double range = static_cast<double>(hi) - static_cast<double>(lo);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        scaled.data[i] = range > 0 ? static_cast<float>((img.data[i] - lo) / range) : 0.0f;
    save_png16(scaled, path);
}

}  // namespace mmreg
