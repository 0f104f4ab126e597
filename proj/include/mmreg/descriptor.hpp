#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "mmreg/detector.hpp"
#include "mmreg/errors.hpp"
#include "mmreg/wpmom.hpp"

namespace mmreg {

struct DescriptorParams {
    int n_rings = 2;
    int n_sectors = 8;
    int n_bins = 12;  // orientation bins spanning the 180-degree WPMOM range
    double patch_radius = 36.0;

    int n_cells() const { return 1 + n_rings * n_sectors; }
    int length() const { return n_cells() * n_bins; }

    void validate() const {
        if (n_rings < 1 || n_sectors < 4 || n_bins < 4 || patch_radius < 8.0)
            throw ParameterError("DescriptorParams: outside documented domain");
    }
};

struct Descriptor {
    std::vector<float> vector;  // unit norm, all entries >= 0
    double x = 0.0;             // keypoint coordinates at the detection level
    double y = 0.0;
    int level = 0;
};

/// Wrap an orientation difference into [-pi/2, pi/2).
inline double wrap_half_angle(double v) {
    double w = std::remainder(v, std::numbers::pi);
    if (w >= std::numbers::pi / 2.0) w -= std::numbers::pi;
    return w;
}

/// The WPMOM value at the keypoint pixel, read directly (no histogram voting).
inline Keypoint assign_reference_orientation(const Keypoint& kp, const OrientationMap& omap) {
    const int x = static_cast<int>(std::lround(kp.x));
    const int y = static_cast<int>(std::lround(kp.y));
    if (!omap.theta.in_bounds(x, y))
        throw ContractError("assign_reference_orientation: keypoint outside map");
    Keypoint out = kp;
    out.reference_orientation = omap.theta(x, y);
    return out;
}

/// GGLOH histogram over WPMOM values: a log-polar grid (central disc plus
/// n_rings x n_sectors cells, ring radii at {1/3, 2/3, 1} of patch_radius for
/// the default two rings) rotated by the reference orientation. Every pixel
/// votes its relative orientation with unit weight, linearly interpolated
/// across the two adjacent bins. Returns nothing when the patch leaves the
/// image (the keypoint is discarded, not an error).
inline std::optional<Descriptor> extract_descriptor(const Keypoint& kp, const OrientationMap& omap,
                                                    const DescriptorParams& params) {
    params.validate();
    const Field& theta = omap.theta;
    const double radius = params.patch_radius;
    const double cx = kp.x, cy = kp.y;
    if (cx - radius < 0.0 || cy - radius < 0.0 || cx + radius > theta.width - 1 ||
        cy + radius > theta.height - 1)
        return std::nullopt;

    const double ref = kp.reference_orientation;
    const int n_bins = params.n_bins;
    const double bin_width = std::numbers::pi / n_bins;
    const double sector_width = 2.0 * std::numbers::pi / params.n_sectors;
    const double ring_step = radius / (params.n_rings + 1);

    std::vector<double> hist(static_cast<std::size_t>(params.n_cells()) * n_bins, 0.0);
    const int cxi = static_cast<int>(std::lround(cx));
    const int cyi = static_cast<int>(std::lround(cy));
    const int reach = static_cast<int>(std::floor(radius));

    for (int dy = -reach; dy <= reach; ++dy) {
        for (int dx = -reach; dx <= reach; ++dx) {
            const double r2 = static_cast<double>(dx) * dx + static_cast<double>(dy) * dy;
            if (r2 > radius * radius) continue;
            const double r = std::sqrt(r2);

            int cell = 0;
            if (r > ring_step) {
                const int ring =
                    std::min(static_cast<int>((r - ring_step) / ring_step), params.n_rings - 1);
                double phi = std::atan2(static_cast<double>(dy), static_cast<double>(dx)) - ref;
                phi = std::fmod(phi, 2.0 * std::numbers::pi);
                if (phi < 0.0) phi += 2.0 * std::numbers::pi;
                const int sector = std::min(static_cast<int>(phi / sector_width), params.n_sectors - 1);
                cell = 1 + ring * params.n_sectors + sector;
            }

            const double rel = wrap_half_angle(theta(cxi + dx, cyi + dy) - ref);
            const double u = (rel + std::numbers::pi / 2.0) / bin_width - 0.5;
            const int i0 = static_cast<int>(std::floor(u));
            const double frac = u - i0;
            const int b0 = ((i0 % n_bins) + n_bins) % n_bins;
            const int b1 = (b0 + 1) % n_bins;
            hist[static_cast<std::size_t>(cell) * n_bins + b0] += 1.0 - frac;
            hist[static_cast<std::size_t>(cell) * n_bins + b1] += frac;
        }
    }

    double norm = 0.0;
    for (double v : hist) norm += v * v;
    norm = std::sqrt(norm);
    if (norm <= 1e-12) return std::nullopt;  // degenerate flat patch

    // normalize, clip at 0.2, renormalize
    for (double& v : hist) v = std::min(v / norm, 0.2);
    norm = 0.0;
    for (double v : hist) norm += v * v;
    norm = std::sqrt(norm);

    Descriptor d;
    d.x = kp.x;
    d.y = kp.y;
    d.level = kp.level;
    d.vector.resize(hist.size());
    for (std::size_t i = 0; i < hist.size(); ++i)
        d.vector[i] = static_cast<float>(hist[i] / norm);
    return d;
}

struct DescribeResult {
    std::vector<Keypoint> keypoints;      // kept keypoints with reference orientations, aligned
    std::vector<Descriptor> descriptors;  // with `keypoints`, input order preserved
    std::vector<int> discarded;           // input indices whose patch left the image
};

inline DescribeResult describe_all(const std::vector<Keypoint>& kps, const OrientationMap& omap,
                                   const DescriptorParams& params) {
    DescribeResult res;
    for (std::size_t i = 0; i < kps.size(); ++i) {
        const Keypoint kp = assign_reference_orientation(kps[i], omap);
        if (auto d = extract_descriptor(kp, omap, params)) {
            res.keypoints.push_back(kp);
            res.descriptors.push_back(std::move(*d));
        } else {
            res.discarded.push_back(static_cast<int>(i));
        }
    }
    return res;
}

}  // namespace mmreg
