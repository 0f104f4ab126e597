#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "mmreg/errors.hpp"
#include "mmreg/fft.hpp"
#include "mmreg/grid.hpp"

namespace mmreg {

struct BankParams {
    int n_scales = 4;
    int n_orients = 6;
    double min_wavelength = 3.0;
    double scale_mult = 2.1;    // wavelength ratio between consecutive scales
    double sigma_on_f = 0.55;   // radial bandwidth (ratio of sigma to center frequency)
    double angular_sigma_ratio = 1.2;  // sigma_theta = ratio * (pi / n_orients) / 2

    double wavelength(int s) const { return min_wavelength * std::pow(scale_mult, s); }
    double max_wavelength() const { return wavelength(n_scales - 1); }
    double orientation(int o) const { return o * std::numbers::pi / n_orients; }
    double angular_sigma() const { return angular_sigma_ratio * std::numbers::pi / (2.0 * n_orients); }
};

/// Frequency-domain LogGabor transfer functions, one real gain grid per
/// (scale, orientation). Gains are nonnegative and zero at DC.
struct FilterBank {
    int width = 0;
    int height = 0;
    BankParams params;
    std::vector<Field> transfer;  // indexed s * n_orients + o

    const Field& at(int s, int o) const { return transfer[static_cast<std::size_t>(s) * params.n_orients + o]; }
};

/// Per-(scale, orientation) quadrature responses of one image.
/// even/odd are the real/imaginary parts; amplitude = hypot(even, odd).
struct BankResponse {
    int width = 0;
    int height = 0;
    int n_scales = 0;
    int n_orients = 0;
    std::vector<Field> even, odd, amplitude;

    std::size_t idx(int s, int o) const { return static_cast<std::size_t>(s) * n_orients + o; }
    const Field& even_at(int s, int o) const { return even[idx(s, o)]; }
    const Field& odd_at(int s, int o) const { return odd[idx(s, o)]; }
    const Field& amplitude_at(int s, int o) const { return amplitude[idx(s, o)]; }
};

/// Build the spectral bank for a given grid size. The radial component is a
/// log-Gaussian centered on 1/wavelength(s); the angular component is a
/// Gaussian in angular deviation from orientation(o), measured one-sided so
/// each filter covers a half-plane cone and the inverse transform is a
/// quadrature pair.
inline FilterBank build_filter_bank(int width, int height, const BankParams& params) {
    if (params.n_scales < 2) throw ParameterError("build_filter_bank: n_scales must be >= 2");
    if (params.n_orients < 3) throw ParameterError("build_filter_bank: n_orients must be >= 3");
    if (params.min_wavelength < 2.0)
        throw ParameterError("build_filter_bank: min_wavelength must be >= 2");
    if (params.max_wavelength() > std::min(width, height))
        throw ParameterError("build_filter_bank: grid " + std::to_string(width) + "x" +
                             std::to_string(height) + " too small to resolve wavelength " +
                             std::to_string(params.max_wavelength()));

    FilterBank bank;
    bank.width = width;
    bank.height = height;
    bank.params = params;
    bank.transfer.reserve(static_cast<std::size_t>(params.n_scales) * params.n_orients);

    const double sigma_theta = params.angular_sigma();
    const double log_sigma_on_f = std::log(params.sigma_on_f);
    const double radial_denom = 2.0 * log_sigma_on_f * log_sigma_on_f;

    for (int s = 0; s < params.n_scales; ++s) {
        const double f0 = 1.0 / params.wavelength(s);
        for (int o = 0; o < params.n_orients; ++o) {
            const double theta = params.orientation(o);
            const double cos_t = std::cos(theta);
            const double sin_t = std::sin(theta);
            Field g(width, height);
            for (int v = 0; v < height; ++v) {
                const double fy = fft_frequency(v, height);
                for (int u = 0; u < width; ++u) {
                    const double fx = fft_frequency(u, width);
                    const double r = std::hypot(fx, fy);
                    if (r == 0.0) continue;  // DC gain stays 0
                    const double lr = std::log(r / f0);
                    const double radial = std::exp(-(lr * lr) / radial_denom);
                    // one-sided angular deviation in [0, pi]
                    const double ds = fy * cos_t - fx * sin_t;
                    const double dc = fx * cos_t + fy * sin_t;
                    const double dtheta = std::abs(std::atan2(ds, dc));
                    const double spread = std::exp(-(dtheta * dtheta) / (2.0 * sigma_theta * sigma_theta));
                    g(u, v) = radial * spread;
                }
            }
            bank.transfer.push_back(std::move(g));
        }
    }
    return bank;
}

inline BankResponse filter_image(const Field& img, const FilterBank& bank) {
    if (img.width != bank.width || img.height != bank.height)
        throw ContractError("filter_image: image dimensions do not match bank grid");

    BankResponse resp;
    resp.width = img.width;
    resp.height = img.height;
    resp.n_scales = bank.params.n_scales;
    resp.n_orients = bank.params.n_orients;

    Spectral2D fft(img.width, img.height);
    const auto spec = fft.forward(img);
    std::vector<std::complex<double>> filtered(spec.size());

    for (int s = 0; s < resp.n_scales; ++s) {
        for (int o = 0; o < resp.n_orients; ++o) {
            const Field& gain = bank.at(s, o);
            for (std::size_t i = 0; i < spec.size(); ++i) filtered[i] = spec[i] * gain.data[i];
            Field re, im;
            fft.inverse(filtered, re, im);
            Field amp(img.width, img.height);
            for (std::size_t i = 0; i < amp.data.size(); ++i)
                amp.data[i] = std::hypot(re.data[i], im.data[i]);
            resp.even.push_back(std::move(re));
            resp.odd.push_back(std::move(im));
            resp.amplitude.push_back(std::move(amp));
        }
    }
    return resp;
}

inline BankResponse filter_image(const ImageGrid& img, const FilterBank& bank) {
    return filter_image(to_field(img), bank);
}

}  // namespace mmreg
