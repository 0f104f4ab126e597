#pragma once

#include <fftw3.h>

#include <complex>
#include <vector>

#include "mmreg/errors.hpp"
#include "mmreg/grid.hpp"

namespace mmreg {

/// Planned 2D complex FFT pair for one grid size. Plans are created with
/// FFTW_ESTIMATE so results are reproducible run to run. Not thread-safe:
/// each thread needs its own instance.
class Spectral2D {
  public:
    Spectral2D(int width, int height) : width_(width), height_(height) {
        if (width < 1 || height < 1) throw ParameterError("Spectral2D: empty grid");
        const std::size_t n = static_cast<std::size_t>(width) * height;
        in_ = fftw_alloc_complex(n);
        out_ = fftw_alloc_complex(n);
        fwd_ = fftw_plan_dft_2d(height, width, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_2d(height, width, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Spectral2D() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(in_);
        fftw_free(out_);
    }
    Spectral2D(const Spectral2D&) = delete;
    Spectral2D& operator=(const Spectral2D&) = delete;

    int width() const { return width_; }
    int height() const { return height_; }

    /// Unnormalized forward transform; element (u, v) lives at v * width + u.
    std::vector<std::complex<double>> forward(const Field& img) const {
        if (img.width != width_ || img.height != height_)
            throw ContractError("Spectral2D::forward: dimension mismatch");
        const std::size_t n = img.size();
        for (std::size_t i = 0; i < n; ++i) {
            in_[i][0] = img.data[i];
            in_[i][1] = 0.0;
        }
        fftw_execute(fwd_);
        std::vector<std::complex<double>> spec(n);
        for (std::size_t i = 0; i < n; ++i) spec[i] = {out_[i][0], out_[i][1]};
        return spec;
    }

    /// Inverse transform with 1/(W*H) normalization; writes real and imaginary
    /// spatial parts.
    void inverse(const std::vector<std::complex<double>>& spec, Field& re, Field& im) const {
        const std::size_t n = static_cast<std::size_t>(width_) * height_;
        if (spec.size() != n) throw ContractError("Spectral2D::inverse: dimension mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            in_[i][0] = spec[i].real();
            in_[i][1] = spec[i].imag();
        }
        fftw_execute(inv_);
        re = Field(width_, height_);
        im = Field(width_, height_);
        const double norm = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            re.data[i] = out_[i][0] * norm;
            im.data[i] = out_[i][1] * norm;
        }
    }

  private:
    int width_, height_;
    fftw_complex* in_;
    fftw_complex* out_;
    fftw_plan fwd_;
    fftw_plan inv_;
};

/// Signed DFT frequency for bin i of n, in cycles per pixel.
inline double fft_frequency(int i, int n) {
    return (i <= n / 2 ? i : i - n) / static_cast<double>(n);
}

}  // namespace mmreg
