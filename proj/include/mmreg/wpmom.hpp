#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "mmreg/errors.hpp"
#include "mmreg/grid.hpp"
#include "mmreg/imgproc.hpp"
#include "mmreg/loggabor.hpp"

namespace mmreg {

struct GradientField {
    Field gx, gy;
};

struct AsgField {
    double sigma = 0.0;
    Field asg_x, asg_y;  // doubled-angle vector components
};

/// Per-pixel dominant local orientation in (-pi/2, pi/2].
struct OrientationMap {
    Field theta;
    std::vector<double> sigmas;
    std::vector<double> weights;  // 1/sigma, strictly decreasing with sigma
};

/// Gradient-like pair from the odd LogGabor responses:
/// gx = sum over (s,o) of odd * cos(theta_o), gy = sum of odd * sin(theta_o).
inline GradientField loggabor_gradients(const BankResponse& resp, const BankParams& params) {
    GradientField g;
    g.gx = Field(resp.width, resp.height);
    g.gy = Field(resp.width, resp.height);
    for (int s = 0; s < resp.n_scales; ++s) {
        for (int o = 0; o < resp.n_orients; ++o) {
            const double ct = std::cos(params.orientation(o));
            const double st = std::sin(params.orientation(o));
            const Field& odd = resp.odd_at(s, o);
            for (std::size_t i = 0; i < odd.data.size(); ++i) {
                g.gx.data[i] += odd.data[i] * ct;
                g.gy.data[i] += odd.data[i] * st;
            }
        }
    }
    return g;
}

inline GradientField loggabor_gradients(const ImageGrid& img, const FilterBank& bank) {
    if (img.width != bank.width || img.height != bank.height)
        throw ContractError("loggabor_gradients: image dimensions do not match bank grid");
    return loggabor_gradients(filter_image(img, bank), bank.params);
}

/// Average squared gradient over a Gaussian window: the doubled-angle vector
/// (gx^2 - gy^2, 2 gx gy) pooled so opposite gradient polarities reinforce.
inline AsgField average_squared_gradient(const GradientField& grad, double sigma) {
    if (sigma <= 0.0) throw ParameterError("average_squared_gradient: sigma must be > 0");
    Field dx(grad.gx.width, grad.gx.height), dy(grad.gx.width, grad.gx.height);
    for (std::size_t i = 0; i < dx.data.size(); ++i) {
        const double gx = grad.gx.data[i], gy = grad.gy.data[i];
        dx.data[i] = gx * gx - gy * gy;
        dy.data[i] = 2.0 * gx * gy;
    }
    AsgField asg;
    asg.sigma = sigma;
    asg.asg_x = gaussian_window_sum(dx, sigma);
    asg.asg_y = gaussian_window_sum(dy, sigma);
    return asg;
}

/// Quadrant-corrected arctangent with the x = 0 column handled as the
/// arctan limit; range (-pi, pi], and angle(0, 0) = 0.
inline double angle(double x, double y) {
    if (x > 0.0) return std::atan(y / x);
    if (x == 0.0) {
        if (y > 0.0) return std::numbers::pi / 2.0;
        if (y < 0.0) return -std::numbers::pi / 2.0;
        return 0.0;
    }
    if (y >= 0.0) return std::atan(y / x) + std::numbers::pi;
    return std::atan(y / x) - std::numbers::pi;
}

/// Weighted partial main orientation map: per-sigma ASG fields accumulated
/// with 1/sigma weights, then the half-angle of the pooled vector.
inline OrientationMap wpmom_map_from_gradients(const GradientField& grad,
                                               const std::vector<double>& sigmas) {
    if (sigmas.empty()) throw ParameterError("wpmom_map: sigma list must be nonempty");
    for (double s : sigmas)
        if (s <= 0.0) throw ParameterError("wpmom_map: sigmas must be > 0");

    const int w = grad.gx.width, h = grad.gx.height;
    Field acc_x(w, h), acc_y(w, h);
    OrientationMap omap;
    omap.sigmas = sigmas;
    for (double sigma : sigmas) {
        const AsgField asg = average_squared_gradient(grad, sigma);
        const double weight = 1.0 / sigma;
        omap.weights.push_back(weight);
        for (std::size_t i = 0; i < acc_x.data.size(); ++i) {
            acc_x.data[i] += weight * asg.asg_x.data[i];
            acc_y.data[i] += weight * asg.asg_y.data[i];
        }
    }

    omap.theta = Field(w, h);
    for (std::size_t i = 0; i < acc_x.data.size(); ++i) {
        const double x = acc_x.data[i], y = acc_y.data[i];
        omap.theta.data[i] =
            (std::abs(x) < 1e-12 && std::abs(y) < 1e-12) ? 0.0 : 0.5 * angle(x, y);
    }
    return omap;
}

inline OrientationMap wpmom_map(const ImageGrid& img, const FilterBank& bank,
                                const std::vector<double>& sigmas) {
    return wpmom_map_from_gradients(loggabor_gradients(img, bank), sigmas);
}

}  // namespace mmreg
