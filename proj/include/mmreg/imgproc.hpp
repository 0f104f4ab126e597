#pragma once

#include <cmath>
#include <vector>

#include "mmreg/errors.hpp"
#include "mmreg/grid.hpp"

namespace mmreg {

enum class Border { zero, replicate };

/// Truncated discrete Gaussian, radius ceil(3*sigma), normalized to unit mass.
inline std::vector<double> gaussian_kernel(double sigma) {
    if (sigma <= 0.0) throw ParameterError("gaussian_kernel: sigma must be > 0");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

template <typename T>
Grid<T> convolve_separable(const Grid<T>& src, const std::vector<double>& kernel, Border border) {
    const int radius = static_cast<int>(kernel.size()) / 2;
    Grid<T> tmp(src.width, src.height);
    Grid<T> dst(src.width, src.height);
    // horizontal pass
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                int sx = x + i;
                if (border == Border::replicate) {
                    sx = std::clamp(sx, 0, src.width - 1);
                } else if (sx < 0 || sx >= src.width) {
                    continue;
                }
                acc += kernel[i + radius] * src(sx, y);
            }
            tmp(x, y) = static_cast<T>(acc);
        }
    }
    // vertical pass
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                int sy = y + i;
                if (border == Border::replicate) {
                    sy = std::clamp(sy, 0, src.height - 1);
                } else if (sy < 0 || sy >= src.height) {
                    continue;
                }
                acc += kernel[i + radius] * tmp(x, sy);
            }
            dst(x, y) = static_cast<T>(acc);
        }
    }
    return dst;
}

template <typename T>
Grid<T> gaussian_blur(const Grid<T>& src, double sigma, Border border = Border::replicate) {
    return convolve_separable(src, gaussian_kernel(sigma), border);
}

/// Gaussian-weighted local sum with unit-mass kernel; out-of-bounds pixels contribute zero.
/// Shared by the ASG window, the detector structure matrix, and their test oracles.
template <typename T>
Grid<T> gaussian_window_sum(const Grid<T>& src, double sigma) {
    return convolve_separable(src, gaussian_kernel(sigma), Border::zero);
}

/// Bilinear read with coordinates clamped to the valid rectangle.
template <typename T>
double bilinear_at(const Grid<T>& g, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(g.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(g.height - 1));
    const int x0 = std::min(static_cast<int>(x), g.width - 2 >= 0 ? g.width - 2 : 0);
    const int y0 = std::min(static_cast<int>(y), g.height - 2 >= 0 ? g.height - 2 : 0);
    const int x1 = std::min(x0 + 1, g.width - 1);
    const int y1 = std::min(y0 + 1, g.height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    return (1.0 - fx) * (1.0 - fy) * g(x0, y0) + fx * (1.0 - fy) * g(x1, y0) +
           (1.0 - fx) * fy * g(x0, y1) + fx * fy * g(x1, y1);
}

/// Bilinear read returning `fill` when the sample point falls outside the image.
template <typename T>
double bilinear_or(const Grid<T>& g, double x, double y, double fill) {
    if (x < 0.0 || y < 0.0 || x > g.width - 1 || y > g.height - 1) return fill;
    return bilinear_at(g, x, y);
}

/// Resample to (new_w, new_h); destination pixel (u, v) reads the source at
/// (u * sx, v * sy). Top-left anchored so pyramid coordinates rescale by the
/// nominal factor exactly.
template <typename T>
Grid<T> resample_bilinear(const Grid<T>& src, int new_w, int new_h, double sx, double sy) {
    Grid<T> dst(new_w, new_h);
    for (int v = 0; v < new_h; ++v)
        for (int u = 0; u < new_w; ++u)
            dst(u, v) = static_cast<T>(bilinear_at(src, u * sx, v * sy));
    return dst;
}

}  // namespace mmreg
