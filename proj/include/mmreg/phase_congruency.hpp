#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mmreg/errors.hpp"
#include "mmreg/grid.hpp"
#include "mmreg/loggabor.hpp"

namespace mmreg {

struct PcParams {
    double noise_k = 2.0;   // T = mu_R + noise_k * sigma_R
    double cutoff = 0.4;    // frequency-spread sigmoid center
    double gain = 10.0;     // frequency-spread sigmoid steepness
    double epsilon = 1e-4;  // division guard
    bool keep_phase_deviation = false;
};

struct PhaseCongruencyField {
    std::vector<Field> pc_per_orient;      // PC map per orientation, values in [0, 1]
    std::vector<Field> weight_per_orient;  // frequency-spread weight, values in [0, 1]
    std::vector<double> noise_threshold;   // T per orientation
    double epsilon = 1e-4;
    int n_scales = 0;
    std::vector<Field> phase_deviation;  // optional retention, indexed s * n_orients + o
};

struct MomentMaps {
    Field a, b, c;     // moment sums
    Field psi;         // principal axis, diagnostic only
    Field m_max;       // edge strength
    Field m_min;       // corner strength
    Field m_combined;  // m_max + m_min
};

namespace detail {

inline double rayleigh_noise_threshold(const Field& smallest_scale_amplitude, double k) {
    std::vector<double> vals = smallest_scale_amplitude.data;
    const std::size_t mid = vals.size() / 2;
    std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
    const double median = vals[mid];
    // Rayleigh: median = sigma*sqrt(2 ln 2), mean = sigma*sqrt(pi/2), std = sigma*sqrt(2 - pi/2)
    const double sigma_g = median / std::sqrt(std::log(4.0));
    const double mean_r = sigma_g * std::sqrt(std::numbers::pi / 2.0);
    const double std_r = sigma_g * std::sqrt(2.0 - std::numbers::pi / 2.0);
    return mean_r + k * std_r;
}

}  // namespace detail

/// Per-orientation phase congruency. For each orientation the per-scale
/// energy (amplitude times phase-deviation measure) is noise-truncated,
/// summed over scales, spread-weighted, and normalized by total amplitude.
inline PhaseCongruencyField phase_congruency(const BankResponse& resp, const PcParams& params) {
    if (resp.n_scales < 2)
        throw ContractError("phase_congruency: needs a bank with n_scales >= 2");

    const int w = resp.width, h = resp.height;
    const std::size_t n = static_cast<std::size_t>(w) * h;

    PhaseCongruencyField out;
    out.epsilon = params.epsilon;
    out.n_scales = resp.n_scales;

    for (int o = 0; o < resp.n_orients; ++o) {
        Field sum_e(w, h), sum_o(w, h), sum_an(w, h), max_an(w, h);
        for (int s = 0; s < resp.n_scales; ++s) {
            const Field& e = resp.even_at(s, o);
            const Field& od = resp.odd_at(s, o);
            const Field& an = resp.amplitude_at(s, o);
            for (std::size_t i = 0; i < n; ++i) {
                sum_e.data[i] += e.data[i];
                sum_o.data[i] += od.data[i];
                sum_an.data[i] += an.data[i];
                max_an.data[i] = std::max(max_an.data[i], an.data[i]);
            }
        }

        const double t = detail::rayleigh_noise_threshold(resp.amplitude_at(0, o), params.noise_k);

        Field pc(w, h), weight(w, h);
        std::vector<Field> dphi;
        if (params.keep_phase_deviation)
            dphi.assign(resp.n_scales, Field(w, h));

        for (std::size_t i = 0; i < n; ++i) {
            const double x_energy = std::hypot(sum_e.data[i], sum_o.data[i]) + params.epsilon;
            const double mean_e = sum_e.data[i] / x_energy;
            const double mean_o = sum_o.data[i] / x_energy;

            double energy = 0.0;
            for (int s = 0; s < resp.n_scales; ++s) {
                const double e = resp.even_at(s, o).data[i];
                const double od = resp.odd_at(s, o).data[i];
                const double a_dphi = e * mean_e + od * mean_o - std::abs(e * mean_o - od * mean_e);
                energy += std::max(a_dphi - t, 0.0);
                if (params.keep_phase_deviation) {
                    const double amp = resp.amplitude_at(s, o).data[i];
                    dphi[s].data[i] = amp > 1e-12 ? a_dphi / amp : 0.0;
                }
            }

            const double spread =
                (sum_an.data[i] / (max_an.data[i] + params.epsilon) - 1.0) / (resp.n_scales - 1);
            const double wgt = 1.0 / (1.0 + std::exp(params.gain * (params.cutoff - spread)));
            weight.data[i] = wgt;
            pc.data[i] = std::clamp(wgt * energy / (sum_an.data[i] + params.epsilon), 0.0, 1.0);
        }

        out.pc_per_orient.push_back(std::move(pc));
        out.weight_per_orient.push_back(std::move(weight));
        out.noise_threshold.push_back(t);
        for (auto& d : dphi) out.phase_deviation.push_back(std::move(d));
    }
    return out;
}

/// Moment analysis of a per-orientation PC stack (one grid per orientation).
inline MomentMaps moment_maps(const std::vector<Field>& pc_stack,
                              const std::vector<double>& orientations) {
    if (pc_stack.size() != orientations.size() || pc_stack.empty())
        throw ContractError("moment_maps: need one PC grid per orientation");
    const int w = pc_stack[0].width, h = pc_stack[0].height;
    for (const Field& f : pc_stack)
        if (f.width != w || f.height != h) throw ContractError("moment_maps: grid shape mismatch");

    MomentMaps mm;
    mm.a = Field(w, h);
    mm.b = Field(w, h);
    mm.c = Field(w, h);
    for (std::size_t k = 0; k < pc_stack.size(); ++k) {
        const double ct = std::cos(orientations[k]);
        const double st = std::sin(orientations[k]);
        const Field& pc = pc_stack[k];
        for (std::size_t i = 0; i < pc.data.size(); ++i) {
            const double px = pc.data[i] * ct;
            const double py = pc.data[i] * st;
            mm.a.data[i] += px * px;
            mm.b.data[i] += 2.0 * px * py;
            mm.c.data[i] += py * py;
        }
    }

    mm.psi = Field(w, h);
    mm.m_max = Field(w, h);
    mm.m_min = Field(w, h);
    mm.m_combined = Field(w, h);
    for (std::size_t i = 0; i < mm.a.data.size(); ++i) {
        const double a = mm.a.data[i], b = mm.b.data[i], c = mm.c.data[i];
        const double disc = std::sqrt(b * b + (a - c) * (a - c));
        mm.m_max.data[i] = 0.5 * (c + a + disc);
        mm.m_min.data[i] = std::max(0.5 * (c + a - disc), 0.0);
        mm.m_combined.data[i] = mm.m_max.data[i] + mm.m_min.data[i];
        if (std::abs(a - c) < 1e-12) {
            // arctan(b / (a - c)) is 0/0 at b = 0 and +-pi/2 in the limit otherwise
            mm.psi.data[i] = std::abs(b) < 1e-12 ? 0.0
                                                 : std::copysign(std::numbers::pi / 4.0, b);
        } else {
            mm.psi.data[i] = 0.5 * std::atan(b / (a - c));
        }
    }
    return mm;
}

inline MomentMaps moment_maps(const PhaseCongruencyField& pcf,
                              const std::vector<double>& orientations) {
    return moment_maps(pcf.pc_per_orient, orientations);
}

}  // namespace mmreg
