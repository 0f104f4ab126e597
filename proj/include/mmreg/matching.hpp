#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "mmreg/descriptor.hpp"
#include "mmreg/errors.hpp"
#include "mmreg/transform.hpp"

namespace mmreg {

struct Match {
    int index_a = -1;
    int index_b = -1;
    double ax = 0.0, ay = 0.0;  // level-0 frame once the pipeline rescales them
    double bx = 0.0, by = 0.0;
    double distance = 0.0;  // descriptor Euclidean distance
    bool inlier = false;
};

struct MatchResult {
    std::vector<Keypoint> keypoints_a;  // level-0 coordinates, aligned with descriptor indices
    std::vector<Keypoint> keypoints_b;
    std::vector<Match> matches;
    Transform transform;
    double rmse = 0.0;           // pixels, inliers only
    std::optional<int> ncm;      // filled when ground truth is supplied
};

namespace detail {

inline double squared_distance(const Descriptor& a, const Descriptor& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.vector.size(); ++i) {
        const double d = static_cast<double>(a.vector[i]) - b.vector[i];
        acc += d * d;
    }
    return acc;
}

/// Index of the nearest descriptor in `set` (ties to the lower index).
inline int nearest_index(const Descriptor& query, const std::vector<Descriptor>& set) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < set.size(); ++j) {
        const double d = squared_distance(query, set[j]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(j);
        }
    }
    return best;
}

}  // namespace detail

/// Nearest-neighbor matching with ratio test and mutual consistency.
/// A descriptor of A is matched to its nearest neighbor in B when
/// d1/d2 < ratio (accepted unconditionally when |B| = 1) and B's nearest
/// neighbor in A closes the same pair. Ties go to the lower B index.
inline std::vector<Match> nn_match(const std::vector<Descriptor>& desc_a,
                                   const std::vector<Descriptor>& desc_b, double ratio) {
    if (ratio <= 0.0 || ratio > 1.0) throw ParameterError("nn_match: ratio must be in (0, 1]");
    std::vector<Match> out;
    if (desc_a.empty() || desc_b.empty()) return out;

    for (std::size_t i = 0; i < desc_a.size(); ++i) {
        double d1 = std::numeric_limits<double>::infinity();
        double d2 = std::numeric_limits<double>::infinity();
        int j1 = -1;
        for (std::size_t j = 0; j < desc_b.size(); ++j) {
            const double d = detail::squared_distance(desc_a[i], desc_b[j]);
            if (d < d1) {
                d2 = d1;
                d1 = d;
                j1 = static_cast<int>(j);
            } else if (d < d2) {
                d2 = d;
            }
        }
        const bool accepted = desc_b.size() == 1 || (d1 == 0.0 && d2 == 0.0) ||
                              d1 < ratio * ratio * d2;
        if (!accepted) continue;
        if (detail::nearest_index(desc_b[j1], desc_a) != static_cast<int>(i)) continue;

        Match m;
        m.index_a = static_cast<int>(i);
        m.index_b = j1;
        m.ax = desc_a[i].x;
        m.ay = desc_a[i].y;
        m.bx = desc_b[j1].x;
        m.by = desc_b[j1].y;
        m.distance = std::sqrt(d1);
        out.push_back(m);
    }
    return out;
}

struct FscResult {
    std::vector<Match> matches;  // input order, inlier flags set
    Transform transform;
    int inlier_count = 0;
};

/// Two-stage fast sample consensus: a standard consensus pass over all
/// matches, then a second pass whose samples are drawn only from the first
/// pass's best consensus set, then a least-squares refit on the final
/// inlier set. Deterministic for a fixed seed.
inline FscResult fsc_filter(std::vector<Match> matches, TransformKind kind, double inlier_tol,
                            int iterations, std::uint64_t seed) {
    const int sample_size = minimal_sample(kind);
    const int n = static_cast<int>(matches.size());
    if (n < sample_size)
        throw DegenerateInputError("fsc_filter: " + std::to_string(n) + " matches, need " +
                                   std::to_string(sample_size));

    std::vector<PointPair> pairs(matches.size());
    for (std::size_t i = 0; i < matches.size(); ++i)
        pairs[i] = {matches[i].ax, matches[i].ay, matches[i].bx, matches[i].by};

    std::mt19937_64 rng(seed);
    std::vector<int> sample(sample_size);

    auto consensus_stage = [&](const std::vector<int>& pool) {
        std::vector<int> best;
        for (int it = 0; it < iterations; ++it) {
            // draw sample_size distinct pool entries
            for (int k = 0; k < sample_size; ++k) {
                bool fresh = false;
                while (!fresh) {
                    sample[k] = pool[rng() % pool.size()];
                    fresh = true;
                    for (int j = 0; j < k; ++j)
                        if (sample[j] == sample[k]) fresh = false;
                }
            }
            std::vector<PointPair> subset;
            subset.reserve(sample_size);
            for (int idx : sample) subset.push_back(pairs[idx]);

            Transform model;
            try {
                model = estimate_transform(subset, kind);
            } catch (const RankDeficiencyError&) {
                continue;
            }
            std::vector<int> inliers;
            for (int i = 0; i < n; ++i)
                if (residual(model, pairs[i]) <= inlier_tol) inliers.push_back(i);
            if (inliers.size() > best.size()) best = std::move(inliers);
        }
        return best;
    };

    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    std::vector<int> stage1 = consensus_stage(all);
    if (static_cast<int>(stage1.size()) < sample_size)
        throw NoConsensusError("fsc_filter: no model reached the minimal sample",
                               static_cast<int>(stage1.size()));
    std::vector<int> stage2 = consensus_stage(stage1);
    if (stage2.size() < stage1.size()) stage2 = stage1;  // resampling may not improve

    std::vector<PointPair> final_pairs;
    final_pairs.reserve(stage2.size());
    for (int idx : stage2) final_pairs.push_back(pairs[idx]);

    FscResult res;
    res.transform = estimate_transform(final_pairs, kind);
    res.inlier_count = static_cast<int>(stage2.size());
    for (int idx : stage2) matches[idx].inlier = true;
    res.matches = std::move(matches);
    return res;
}

/// Number of correct matches under a ground-truth transform.
inline int compute_ncm(const std::vector<Match>& matches, const Transform& ground_truth,
                       double tol) {
    const double det = ground_truth.kind == TransformKind::projective
                           ? ground_truth.m[0] * (ground_truth.m[4] * ground_truth.m[8] -
                                                  ground_truth.m[5] * ground_truth.m[7]) -
                                 ground_truth.m[1] * (ground_truth.m[3] * ground_truth.m[8] -
                                                      ground_truth.m[5] * ground_truth.m[6]) +
                                 ground_truth.m[2] * (ground_truth.m[3] * ground_truth.m[7] -
                                                      ground_truth.m[4] * ground_truth.m[6])
                           : ground_truth.det2x2();
    if (std::abs(det) <= 1e-12) throw ContractError("compute_ncm: ground truth not invertible");

    int count = 0;
    for (const Match& m : matches) {
        auto [u, v] = ground_truth.apply(m.ax, m.ay);
        if (std::hypot(u - m.bx, v - m.by) <= tol) ++count;
    }
    return count;
}

/// RMSE of inlier residuals under a transform.
inline double inlier_rmse(const std::vector<Match>& matches, const Transform& t) {
    double acc = 0.0;
    int n = 0;
    for (const Match& m : matches) {
        if (!m.inlier) continue;
        const double r = residual(t, {m.ax, m.ay, m.bx, m.by});
        acc += r * r;
        ++n;
    }
    return n > 0 ? std::sqrt(acc / n) : 0.0;
}

}  // namespace mmreg
