#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmreg/errors.hpp"
#include "mmreg/grid.hpp"
#include "mmreg/imgproc.hpp"

namespace mmreg {

struct CornernessField {
    Field response;  // smaller structure-matrix eigenvalue, >= 0
    double window_sigma = 1.5;
    Field grad_x, grad_y;
};

struct Keypoint {
    double x = 0.0;  // pixel coordinates at the detection level, origin top-left
    double y = 0.0;
    double strength = 0.0;
    int level = 0;
    double reference_orientation = 0.0;  // radians in (-pi/2, pi/2], filled by the descriptor stage
};

/// Shi-Tomasi response of a combined moment map: central-difference
/// gradients, Gaussian-windowed structure matrix, closed-form smaller
/// eigenvalue 0.5*(p + r - sqrt((p - r)^2 + 4 q^2)).
inline CornernessField cornerness_map(const Field& m_w, double window_sigma) {
    const int w = m_w.width, h = m_w.height;
    CornernessField f;
    f.window_sigma = window_sigma;
    f.grad_x = Field(w, h);
    f.grad_y = Field(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
            const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
            f.grad_x(x, y) = 0.5 * (m_w(xp, y) - m_w(xm, y));
            f.grad_y(x, y) = 0.5 * (m_w(x, yp) - m_w(x, ym));
        }
    }

    Field gxx(w, h), gxy(w, h), gyy(w, h);
    for (std::size_t i = 0; i < gxx.data.size(); ++i) {
        gxx.data[i] = f.grad_x.data[i] * f.grad_x.data[i];
        gxy.data[i] = f.grad_x.data[i] * f.grad_y.data[i];
        gyy.data[i] = f.grad_y.data[i] * f.grad_y.data[i];
    }
    const Field p = gaussian_window_sum(gxx, window_sigma);
    const Field q = gaussian_window_sum(gxy, window_sigma);
    const Field r = gaussian_window_sum(gyy, window_sigma);

    f.response = Field(w, h);
    for (std::size_t i = 0; i < f.response.data.size(); ++i) {
        const double pp = p.data[i], qq = q.data[i], rr = r.data[i];
        const double lam_min = 0.5 * (pp + rr - std::sqrt((pp - rr) * (pp - rr) + 4.0 * qq * qq));
        f.response.data[i] = std::max(lam_min, 0.0);
    }
    return f;
}

namespace detail {

/// Linear-interpolation quantile of a nonempty sample.
inline double quantile(std::vector<double> vals, double q) {
    std::sort(vals.begin(), vals.end());
    const double pos = q * static_cast<double>(vals.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= vals.size()) return vals.back();
    const double frac = pos - static_cast<double>(i);
    return vals[i] + (vals[i + 1] - vals[i]) * frac;
}

}  // namespace detail

/// Non-maximum suppression plus quantile thresholding. A pixel survives NMS
/// if it beats every neighbor within the Chebyshev radius, where equal
/// responses are won by the lexicographically smaller (y, x).
inline std::vector<Keypoint> detect_keypoints(const CornernessField& field,
                                              double threshold_quantile, int nms_radius,
                                              int max_points, int border) {
    if (threshold_quantile <= 0.0 || threshold_quantile >= 1.0)
        throw ParameterError("detect_keypoints: threshold_quantile must be in (0, 1)");
    if (nms_radius < 1) throw ParameterError("detect_keypoints: nms_radius must be >= 1");

    const Field& resp = field.response;
    std::vector<double> positives;
    for (double v : resp.data)
        if (v > 0.0) positives.push_back(v);
    if (positives.empty()) return {};
    const double threshold = detail::quantile(std::move(positives), threshold_quantile);

    std::vector<Keypoint> kps;
    for (int y = border; y < resp.height - border; ++y) {
        for (int x = border; x < resp.width - border; ++x) {
            const double v = resp(x, y);
            if (v < threshold) continue;
            bool is_max = true;
            for (int dy = -nms_radius; dy <= nms_radius && is_max; ++dy) {
                const int ny = y + dy;
                if (ny < 0 || ny >= resp.height) continue;
                for (int dx = -nms_radius; dx <= nms_radius; ++dx) {
                    const int nx = x + dx;
                    if (nx < 0 || nx >= resp.width || (dx == 0 && dy == 0)) continue;
                    const double nv = resp(nx, ny);
                    if (nv > v || (nv == v && (ny < y || (ny == y && nx < x)))) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) kps.push_back({static_cast<double>(x), static_cast<double>(y), v, 0, 0.0});
        }
    }

    std::sort(kps.begin(), kps.end(), [](const Keypoint& a, const Keypoint& b) {
        if (a.strength != b.strength) return a.strength > b.strength;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    if (static_cast<int>(kps.size()) > max_points) kps.resize(max_points);
    return kps;
}

}  // namespace mmreg
