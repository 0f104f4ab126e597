#pragma once

#include <cmath>
#include <numbers>

#include "mmreg/errors.hpp"
#include "mmreg/grid.hpp"
#include "mmreg/imgproc.hpp"
#include "mmreg/transform.hpp"

namespace mmreg {

/// Similarity warp x' = s R (x - c) + c + t, written as a 3x3 matrix.
/// With c = 0 this is the plain rotation/scale/translation about the origin.
inline Transform make_similarity(double rotation_deg, double scale, double tx, double ty,
                                 double cx = 0.0, double cy = 0.0) {
    const double th = rotation_deg * std::numbers::pi / 180.0;
    const double a = scale * std::cos(th);
    const double b = scale * std::sin(th);
    Transform t;
    t.kind = TransformKind::similarity;
    t.m = {a, -b, cx - (a * cx - b * cy) + tx,
           b, a,  cy - (b * cx + a * cy) + ty,
           0, 0,  1};
    return t;
}

/// Inverse-map warp: output pixel p reads the input at T^-1(p); samples
/// outside the input are zero. Output canvas keeps the input size.
inline ImageGrid warp_image(const ImageGrid& img, const Transform& t) {
    const Transform inv = t.inverse();
    ImageGrid out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            auto [sx, sy] = inv.apply(x, y);
            out(x, y) = static_cast<float>(bilinear_or(img, sx, sy, 0.0));
        }
    }
    return out;
}

enum class DistortionKind { none, affine, invert, gamma };

inline DistortionKind distortion_kind_from_string(const std::string& s) {
    if (s == "none") return DistortionKind::none;
    if (s == "affine") return DistortionKind::affine;
    if (s == "invert") return DistortionKind::invert;
    if (s == "gamma") return DistortionKind::gamma;
    throw ParseError("unknown distortion kind: " + s);
}

/// Intensity distortion menu mirroring the common multi-modal cases:
/// per-image affine intensity, polarity inversion, and gamma with optional
/// blur and resolution loss.
struct DistortionSpec {
    DistortionKind kind = DistortionKind::none;
    double gain = 1.0;        // affine
    double bias = 0.0;        // affine
    double gamma = 1.0;       // gamma
    double blur_sigma = 0.0;  // gamma; 0 disables
    double downsample = 1.0;  // gamma; resolution-loss factor, 1 disables
};

inline ImageGrid distort_image(const ImageGrid& img, const DistortionSpec& spec) {
    ImageGrid out = img;
    switch (spec.kind) {
        case DistortionKind::none:
            return out;
        case DistortionKind::affine:
            for (float& v : out.data)
                v = static_cast<float>(std::clamp(spec.gain * v + spec.bias, 0.0, 1.0));
            return out;
        case DistortionKind::invert:
            for (float& v : out.data) v = 1.0f - v;
            return out;
        case DistortionKind::gamma: {
            if (spec.gamma <= 0.0) throw ParameterError("distort_image: gamma must be > 0");
            for (float& v : out.data)
                v = static_cast<float>(std::pow(std::max(v, 0.0f), spec.gamma));
            if (spec.blur_sigma > 0.0) out = gaussian_blur(out, spec.blur_sigma, Border::replicate);
            if (spec.downsample > 1.0) {
                const int w = std::max(static_cast<int>(std::lround(img.width / spec.downsample)), 2);
                const int h = std::max(static_cast<int>(std::lround(img.height / spec.downsample)), 2);
                ImageGrid small = resample_bilinear(out, w, h, img.width / static_cast<double>(w),
                                                    img.height / static_cast<double>(h));
                out = resample_bilinear(small, img.width, img.height,
                                        w / static_cast<double>(img.width),
                                        h / static_cast<double>(img.height));
            }
            return out;
        }
    }
    return out;
}

}  // namespace mmreg
