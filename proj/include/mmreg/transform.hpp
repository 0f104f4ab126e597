#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "mmreg/errors.hpp"

namespace mmreg {

enum class TransformKind { similarity, affine, projective };

inline int minimal_sample(TransformKind kind) {
    switch (kind) {
        case TransformKind::similarity: return 2;
        case TransformKind::affine: return 3;
        default: return 4;
    }
}

inline std::string to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::similarity: return "similarity";
        case TransformKind::affine: return "affine";
        default: return "projective";
    }
}

inline TransformKind transform_kind_from_string(const std::string& s) {
    if (s == "similarity") return TransformKind::similarity;
    if (s == "affine") return TransformKind::affine;
    if (s == "projective") return TransformKind::projective;
    throw ParseError("unknown transform kind: " + s);
}

struct Transform {
    TransformKind kind = TransformKind::similarity;
    std::array<double, 9> m = {1, 0, 0, 0, 1, 0, 0, 0, 1};  // row-major 3x3

    std::pair<double, double> apply(double x, double y) const {
        const double u = m[0] * x + m[1] * y + m[2];
        const double v = m[3] * x + m[4] * y + m[5];
        if (kind != TransformKind::projective) return {u, v};
        const double w = m[6] * x + m[7] * y + m[8];
        return {u / w, v / w};
    }

    double det2x2() const { return m[0] * m[4] - m[1] * m[3]; }

    Transform inverse() const {
        Eigen::Matrix3d h;
        h << m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8];
        if (std::abs(h.determinant()) < 1e-12)
            throw RankDeficiencyError("Transform::inverse: singular matrix");
        Eigen::Matrix3d g = h.inverse();
        Transform out;
        out.kind = kind;
        if (kind != TransformKind::projective) {
            g /= g(2, 2);  // keep the (0, 0, 1) bottom row exactly
            g(2, 0) = g(2, 1) = 0.0;
            g(2, 2) = 1.0;
        }
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out.m[r * 3 + c] = g(r, c);
        return out;
    }
};

struct PointPair {
    double ax = 0.0, ay = 0.0;
    double bx = 0.0, by = 0.0;
};

inline double residual(const Transform& t, const PointPair& p) {
    auto [u, v] = t.apply(p.ax, p.ay);
    return std::hypot(u - p.bx, v - p.by);
}

namespace detail {

inline Transform fit_similarity(const std::vector<PointPair>& pairs) {
    using C = std::complex<double>;
    C mean_a(0, 0), mean_b(0, 0);
    for (const auto& p : pairs) {
        mean_a += C(p.ax, p.ay);
        mean_b += C(p.bx, p.by);
    }
    mean_a /= static_cast<double>(pairs.size());
    mean_b /= static_cast<double>(pairs.size());

    double var_a = 0.0;
    C cov(0, 0);
    for (const auto& p : pairs) {
        const C da = C(p.ax, p.ay) - mean_a;
        const C db = C(p.bx, p.by) - mean_b;
        var_a += std::norm(da);
        cov += db * std::conj(da);
    }
    if (var_a < 1e-12) throw RankDeficiencyError("fit_similarity: coincident source points");
    const C alpha = cov / var_a;
    if (std::norm(alpha) <= 1e-12)
        throw RankDeficiencyError("fit_similarity: degenerate (zero-scale) solution");
    const C t = mean_b - alpha * mean_a;

    Transform out;
    out.kind = TransformKind::similarity;
    out.m = {alpha.real(), -alpha.imag(), t.real(),
             alpha.imag(), alpha.real(),  t.imag(),
             0.0,          0.0,           1.0};
    return out;
}

inline Transform fit_affine(const std::vector<PointPair>& pairs) {
    Eigen::Matrix3d n = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rx = Eigen::Vector3d::Zero(), ry = Eigen::Vector3d::Zero();
    for (const auto& p : pairs) {
        const Eigen::Vector3d phi(p.ax, p.ay, 1.0);
        n += phi * phi.transpose();
        rx += phi * p.bx;
        ry += phi * p.by;
    }
    Eigen::FullPivLU<Eigen::Matrix3d> lu(n);
    lu.setThreshold(1e-9);
    if (lu.rank() < 3) throw RankDeficiencyError("fit_affine: collinear or coincident points");
    const Eigen::Vector3d row0 = lu.solve(rx);
    const Eigen::Vector3d row1 = lu.solve(ry);

    Transform out;
    out.kind = TransformKind::affine;
    out.m = {row0(0), row0(1), row0(2), row1(0), row1(1), row1(2), 0.0, 0.0, 1.0};
    if (std::abs(out.det2x2()) <= 1e-12)
        throw RankDeficiencyError("fit_affine: degenerate linear part");
    return out;
}

struct Normalization {
    double scale = 1.0, cx = 0.0, cy = 0.0;
    std::pair<double, double> apply(double x, double y) const {
        return {(x - cx) * scale, (y - cy) * scale};
    }
};

inline Normalization hartley_normalization(const std::vector<PointPair>& pairs, bool side_a) {
    Normalization n;
    for (const auto& p : pairs) {
        n.cx += side_a ? p.ax : p.bx;
        n.cy += side_a ? p.ay : p.by;
    }
    n.cx /= static_cast<double>(pairs.size());
    n.cy /= static_cast<double>(pairs.size());
    double mean_dist = 0.0;
    for (const auto& p : pairs)
        mean_dist += std::hypot((side_a ? p.ax : p.bx) - n.cx, (side_a ? p.ay : p.by) - n.cy);
    mean_dist /= static_cast<double>(pairs.size());
    if (mean_dist < 1e-12) throw RankDeficiencyError("fit_projective: coincident points");
    n.scale = std::sqrt(2.0) / mean_dist;
    return n;
}

inline Transform fit_projective(const std::vector<PointPair>& pairs) {
    const Normalization na = hartley_normalization(pairs, true);
    const Normalization nb = hartley_normalization(pairs, false);

    Eigen::MatrixXd a(2 * pairs.size(), 9);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [x, y] = na.apply(pairs[i].ax, pairs[i].ay);
        auto [u, v] = nb.apply(pairs[i].bx, pairs[i].by);
        a.row(2 * i) << -x, -y, -1, 0, 0, 0, x * u, y * u, u;
        a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, x * v, y * v, v;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd hv = svd.matrixV().col(8);

    Eigen::Matrix3d hn;
    hn << hv(0), hv(1), hv(2), hv(3), hv(4), hv(5), hv(6), hv(7), hv(8);
    Eigen::Matrix3d ta, tb_inv;
    ta << na.scale, 0, -na.scale * na.cx, 0, na.scale, -na.scale * na.cy, 0, 0, 1;
    tb_inv << 1.0 / nb.scale, 0, nb.cx, 0, 1.0 / nb.scale, nb.cy, 0, 0, 1;
    Eigen::Matrix3d h = tb_inv * hn * ta;

    if (std::abs(h(2, 2)) > 1e-12)
        h /= h(2, 2);
    else
        h /= h.norm();
    if (std::abs(h.determinant()) < 1e-12)
        throw RankDeficiencyError("fit_projective: degenerate point configuration");

    Transform out;
    out.kind = TransformKind::projective;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out.m[r * 3 + c] = h(r, c);
    return out;
}

}  // namespace detail

/// Least-squares model fit: closed-form 2D Procrustes with scale
/// (similarity), normal equations (affine), or normalized DLT (projective).
inline Transform estimate_transform(const std::vector<PointPair>& pairs, TransformKind kind) {
    if (static_cast<int>(pairs.size()) < minimal_sample(kind))
        throw DegenerateInputError("estimate_transform: need at least " +
                                   std::to_string(minimal_sample(kind)) + " pairs for " +
                                   to_string(kind));
    switch (kind) {
        case TransformKind::similarity: return detail::fit_similarity(pairs);
        case TransformKind::affine: return detail::fit_affine(pairs);
        default: return detail::fit_projective(pairs);
    }
}

}  // namespace mmreg
