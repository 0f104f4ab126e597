#pragma once

// Independent reference implementations used to check the library's fast
// paths. Everything here is deliberately naive: direct DFT sums, direct
// circular convolution, per-pixel formula evaluation, exhaustive matching.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "mmreg/descriptor.hpp"
#include "mmreg/grid.hpp"
#include "mmreg/matching.hpp"

namespace test_oracles {

using mmreg::Field;

/// Direct O(N^2) inverse 2D DFT with 1/(W*H) normalization.
inline void naive_idft2(const std::vector<std::complex<double>>& spec, int w, int h, Field& re,
                        Field& im) {
    re = Field(w, h);
    im = Field(w, h);
    const double two_pi = 2.0 * std::numbers::pi;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::complex<double> acc(0.0, 0.0);
            for (int v = 0; v < h; ++v) {
                for (int u = 0; u < w; ++u) {
                    const double phase = two_pi * (static_cast<double>(u) * x / w +
                                                   static_cast<double>(v) * y / h);
                    acc += spec[static_cast<std::size_t>(v) * w + u] *
                           std::complex<double>(std::cos(phase), std::sin(phase));
                }
            }
            acc /= static_cast<double>(w) * h;
            re(x, y) = acc.real();
            im(x, y) = acc.imag();
        }
    }
}

/// Direct circular convolution of a real image with a complex kernel.
inline void circular_convolve(const Field& img, const Field& ker_re, const Field& ker_im,
                              Field& out_re, Field& out_im) {
    const int w = img.width, h = img.height;
    out_re = Field(w, h);
    out_im = Field(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc_re = 0.0, acc_im = 0.0;
            for (int v = 0; v < h; ++v) {
                for (int u = 0; u < w; ++u) {
                    const int kx = ((x - u) % w + w) % w;
                    const int ky = ((y - v) % h + h) % h;
                    acc_re += img(u, v) * ker_re(kx, ky);
                    acc_im += img(u, v) * ker_im(kx, ky);
                }
            }
            out_re(x, y) = acc_re;
            out_im(x, y) = acc_im;
        }
    }
}

/// Per-pixel Gaussian-weighted windowed sum: the definition the separable
/// implementation must reproduce (zero outside the image, unit-mass kernel).
inline Field naive_gaussian_window_sum(const Field& src, double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double mass = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        mass += k[i + radius];
    }
    for (double& v : k) v /= mass;

    Field out(src.width, src.height);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            double acc = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int sx = x + dx, sy = y + dy;
                    if (sx < 0 || sx >= src.width || sy < 0 || sy >= src.height) continue;
                    acc += k[dx + radius] * k[dy + radius] * src(sx, sy);
                }
            }
            out(x, y) = acc;
        }
    }
    return out;
}

struct MomentSample {
    double a = 0, b = 0, c = 0, m_max = 0, m_min = 0, m_combined = 0;
};

/// Moment formulas evaluated on one pixel's orientation stack.
inline MomentSample naive_moments(const std::vector<double>& pc_values,
                                  const std::vector<double>& orientations) {
    MomentSample s;
    for (std::size_t k = 0; k < pc_values.size(); ++k) {
        const double px = pc_values[k] * std::cos(orientations[k]);
        const double py = pc_values[k] * std::sin(orientations[k]);
        s.a += px * px;
        s.b += 2.0 * px * py;
        s.c += py * py;
    }
    const double disc = std::sqrt(s.b * s.b + (s.a - s.c) * (s.a - s.c));
    s.m_max = 0.5 * (s.c + s.a + disc);
    s.m_min = 0.5 * (s.c + s.a - disc);
    s.m_combined = s.m_max + s.m_min;
    return s;
}

/// Exhaustive double-loop NN matching with ratio test and mutual check,
/// mirroring the documented tie rules.
inline std::vector<mmreg::Match> brute_nn_match(const std::vector<mmreg::Descriptor>& a,
                                                const std::vector<mmreg::Descriptor>& b,
                                                double ratio) {
    auto dist = [](const mmreg::Descriptor& p, const mmreg::Descriptor& q) {
        double acc = 0.0;
        for (std::size_t i = 0; i < p.vector.size(); ++i) {
            const double d = static_cast<double>(p.vector[i]) - q.vector[i];
            acc += d * d;
        }
        return acc;
    };
    std::vector<mmreg::Match> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::vector<double> ds(b.size());
        for (std::size_t j = 0; j < b.size(); ++j) ds[j] = dist(a[i], b[j]);
        std::size_t j1 = 0;
        for (std::size_t j = 1; j < b.size(); ++j)
            if (ds[j] < ds[j1]) j1 = j;
        double d2 = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j)
            if (j != j1 && ds[j] < d2) d2 = ds[j];

        const bool ok =
            b.size() == 1 || (ds[j1] == 0.0 && d2 == 0.0) || ds[j1] < ratio * ratio * d2;
        if (!ok) continue;

        std::size_t back = 0;
        double best_back = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = dist(b[j1], a[k]);
            if (d < best_back) {
                best_back = d;
                back = k;
            }
        }
        if (back != i) continue;

        mmreg::Match m;
        m.index_a = static_cast<int>(i);
        m.index_b = static_cast<int>(j1);
        m.ax = a[i].x;
        m.ay = a[i].y;
        m.bx = b[j1].x;
        m.by = b[j1].y;
        m.distance = std::sqrt(ds[j1]);
        out.push_back(m);
    }
    return out;
}

}  // namespace test_oracles
