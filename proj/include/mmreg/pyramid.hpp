#pragma once

#include <cmath>
#include <vector>

#include "mmreg/errors.hpp"
#include "mmreg/grid.hpp"
#include "mmreg/imgproc.hpp"

namespace mmreg {

/// Affine min-max stretch to [0, 1]. A constant image maps to all zeros.
inline ImageGrid preprocess(const ImageGrid& img) {
    if (img.empty()) throw ContractError("preprocess: empty image");
    auto [lo, hi] = min_max(img);
    ImageGrid out(img.width, img.height);
    const double range = static_cast<double>(hi) - static_cast<double>(lo);
    if (range <= 0.0) return out;
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = static_cast<float>((img.data[i] - lo) / range);
    return out;
}

struct Pyramid {
    std::vector<ImageGrid> levels;  // level 0 is the input, unmodified
    double scale_factor = 2.0;
    double blur_sigma = 1.0;
    int requested_levels = 0;  // may exceed levels.size() when small levels were truncated

    /// Multiply level-k pixel coordinates by this to land in the level-0 frame.
    double level_scale(int level) const { return std::pow(scale_factor, level); }
};

/// Gaussian blur + bilinear decimation chain. Level k dimensions follow
/// floor(level0 / scale_factor^k); levels that would drop below 32 px on
/// either side are silently truncated.
inline Pyramid build_pyramid(const ImageGrid& img, int n_levels, double scale_factor,
                             double blur_sigma) {
    if (n_levels < 1) throw ParameterError("build_pyramid: n_levels must be >= 1");
    if (scale_factor <= 1.0) throw ParameterError("build_pyramid: scale_factor must be > 1");

    Pyramid pyr;
    pyr.scale_factor = scale_factor;
    pyr.blur_sigma = blur_sigma;
    pyr.requested_levels = n_levels;
    pyr.levels.push_back(img);

    for (int k = 1; k < n_levels; ++k) {
        const double denom = std::pow(scale_factor, k);
        const int w = static_cast<int>(std::floor(img.width / denom));
        const int h = static_cast<int>(std::floor(img.height / denom));
        if (w < 32 || h < 32) break;
        ImageGrid blurred = gaussian_blur(pyr.levels.back(), blur_sigma, Border::replicate);
        pyr.levels.push_back(resample_bilinear(blurred, w, h, scale_factor, scale_factor));
    }
    return pyr;
}

}  // namespace mmreg
