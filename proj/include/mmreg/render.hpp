#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmreg/grid.hpp"
#include "mmreg/imgproc.hpp"
#include "mmreg/matching.hpp"
#include "mmreg/transform.hpp"

namespace mmreg {

struct RgbImage {
    ImageGrid r, g, b;
    RgbImage(int w, int h) : r(w, h), g(w, h), b(w, h) {}
};

inline void draw_line(RgbImage& img, double x0, double y0, double x1, double y1, float cr,
                      float cg, float cb) {
    const int steps = std::max(1, static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const int x = static_cast<int>(std::lround(x0 + t * (x1 - x0)));
        const int y = static_cast<int>(std::lround(y0 + t * (y1 - y0)));
        if (!img.r.in_bounds(x, y)) continue;
        img.r(x, y) = cr;
        img.g(x, y) = cg;
        img.b(x, y) = cb;
    }
}

/// Side-by-side pair with a green line per inlier match.
inline RgbImage render_overlay(const ImageGrid& a, const ImageGrid& b,
                               const std::vector<Match>& matches) {
    const int h = std::max(a.height, b.height);
    RgbImage canvas(a.width + b.width, h);
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x)
            canvas.r(x, y) = canvas.g(x, y) = canvas.b(x, y) = a(x, y);
    for (int y = 0; y < b.height; ++y)
        for (int x = 0; x < b.width; ++x)
            canvas.r(x + a.width, y) = canvas.g(x + a.width, y) = canvas.b(x + a.width, y) = b(x, y);
    for (const Match& m : matches) {
        if (!m.inlier) continue;
        draw_line(canvas, m.ax, m.ay, m.bx + a.width, m.by, 0.0f, 1.0f, 0.0f);
    }
    return canvas;
}

/// Alternating tiles of A and of B warped into A's frame by the transform.
inline ImageGrid render_checkerboard(const ImageGrid& a, const ImageGrid& b, const Transform& t,
                                     int tile = 64) {
    ImageGrid out(a.width, a.height);
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            if (((x / tile) + (y / tile)) % 2 == 0) {
                out(x, y) = a(x, y);
            } else {
                auto [u, v] = t.apply(x, y);
                out(x, y) = static_cast<float>(bilinear_or(b, u, v, 0.0));
            }
        }
    }
    return out;
}

}  // namespace mmreg
