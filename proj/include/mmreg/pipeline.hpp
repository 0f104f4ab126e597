#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "mmreg/config.hpp"
#include "mmreg/descriptor.hpp"
#include "mmreg/detector.hpp"
#include "mmreg/errors.hpp"
#include "mmreg/matching.hpp"
#include "mmreg/phase_congruency.hpp"
#include "mmreg/pyramid.hpp"
#include "mmreg/wpmom.hpp"

namespace mmreg {

struct LevelFeatures {
    std::vector<Keypoint> keypoints;  // level-local coordinates, aligned with descriptors
    std::vector<Descriptor> descriptors;
};

/// Sink for optional diagnostic dumps: (level, map name, grid in [0,1]).
using DumpSink = std::function<void(int, const std::string&, const ImageGrid&)>;

/// Detection and description for one pyramid level: LogGabor bank response,
/// phase congruency, moment maps, Shi-Tomasi keypoints, WPMOM, GGLOH.
inline LevelFeatures extract_level_features(const ImageGrid& level_img, const PipelineConfig& cfg,
                                            int level, const DumpSink* dump = nullptr) {
    const FilterBank bank = build_filter_bank(level_img.width, level_img.height, cfg.bank);
    const BankResponse resp = filter_image(level_img, bank);
    const PhaseCongruencyField pcf = phase_congruency(resp, cfg.pc);

    std::vector<double> orientations(cfg.bank.n_orients);
    for (int o = 0; o < cfg.bank.n_orients; ++o) orientations[o] = cfg.bank.orientation(o);
    const MomentMaps mm = moment_maps(pcf, orientations);

    const CornernessField corner = cornerness_map(mm.m_combined, cfg.detector.window_sigma);
    std::vector<Keypoint> kps =
        detect_keypoints(corner, cfg.detector.threshold_quantile, cfg.detector.nms_radius,
                         cfg.detector.max_points, cfg.effective_border(cfg.bank));
    for (Keypoint& kp : kps) kp.level = level;

    const OrientationMap omap =
        wpmom_map_from_gradients(loggabor_gradients(resp, cfg.bank), cfg.wpmom_sigmas);

    if (dump && *dump) {
        auto stretch = [](const Field& f) {
            auto [lo, hi] = min_max(f);
            ImageGrid g(f.width, f.height);
            const double range = hi - lo;
            for (std::size_t i = 0; i < f.data.size(); ++i)
                g.data[i] = range > 0 ? static_cast<float>((f.data[i] - lo) / range) : 0.0f;
            return g;
        };
        (*dump)(level, "m_w", stretch(mm.m_combined));
        (*dump)(level, "m_max", stretch(mm.m_max));
        (*dump)(level, "m_min", stretch(mm.m_min));
        for (std::size_t o = 0; o < pcf.pc_per_orient.size(); ++o)
            (*dump)(level, "pc_o" + std::to_string(o), stretch(pcf.pc_per_orient[o]));
        // WPMOM maps (-pi/2, pi/2] onto the full output range
        ImageGrid wp(omap.theta.width, omap.theta.height);
        for (std::size_t i = 0; i < wp.data.size(); ++i)
            wp.data[i] = static_cast<float>((omap.theta.data[i] + std::numbers::pi / 2.0) /
                                            std::numbers::pi);
        (*dump)(level, "wpmom", wp);
    }

    const DescribeResult described = describe_all(kps, omap, cfg.descriptor);
    return {described.keypoints, described.descriptors};
}

/// Match two pyramids: per-level features, NN matching across level pairs
/// within the configured gap, 1 px pair deduplication, one FSC pass over the
/// pooled candidates, and a final refit. Keypoints and match coordinates in
/// the result are in the level-0 frame of their respective image.
inline MatchResult multiscale_match(const Pyramid& pyr_a, const Pyramid& pyr_b,
                                    const PipelineConfig& cfg, const DumpSink* dump_a = nullptr,
                                    const DumpSink* dump_b = nullptr) {
    if (pyr_a.levels.empty() || pyr_b.levels.empty())
        throw ContractError("multiscale_match: empty pyramid");

    auto extract_all = [&cfg](const Pyramid& pyr, const DumpSink* dump) {
        std::vector<LevelFeatures> feats;
        for (std::size_t k = 0; k < pyr.levels.size(); ++k) {
            try {
                feats.push_back(extract_level_features(pyr.levels[k], cfg, static_cast<int>(k), dump));
            } catch (const ParameterError&) {
                break;  // level too small for the configured bank; stop descending
            }
        }
        return feats;
    };
    const std::vector<LevelFeatures> feats_a = extract_all(pyr_a, dump_a);
    const std::vector<LevelFeatures> feats_b = extract_all(pyr_b, dump_b);

    MatchResult result;
    std::vector<int> offset_a, offset_b;
    for (const auto& f : feats_a) {
        offset_a.push_back(static_cast<int>(result.keypoints_a.size()));
        for (Keypoint kp : f.keypoints) {
            const double s = pyr_a.level_scale(kp.level);
            kp.x *= s;
            kp.y *= s;
            result.keypoints_a.push_back(kp);
        }
    }
    for (const auto& f : feats_b) {
        offset_b.push_back(static_cast<int>(result.keypoints_b.size()));
        for (Keypoint kp : f.keypoints) {
            const double s = pyr_b.level_scale(kp.level);
            kp.x *= s;
            kp.y *= s;
            result.keypoints_b.push_back(kp);
        }
    }

    std::vector<Match> pool;
    for (std::size_t i = 0; i < feats_a.size(); ++i) {
        for (std::size_t j = 0; j < feats_b.size(); ++j) {
            if (std::abs(static_cast<int>(i) - static_cast<int>(j)) > cfg.matching.level_gap)
                continue;
            std::vector<Match> ms =
                nn_match(feats_a[i].descriptors, feats_b[j].descriptors, cfg.matching.ratio);
            const double sa = pyr_a.level_scale(static_cast<int>(i));
            const double sb = pyr_b.level_scale(static_cast<int>(j));
            for (Match& m : ms) {
                m.ax *= sa;
                m.ay *= sa;
                m.bx *= sb;
                m.by *= sb;
                m.index_a += offset_a[i];
                m.index_b += offset_b[j];
                pool.push_back(m);
            }
        }
    }

    // deduplicate correspondences seen from several level pairs
    std::sort(pool.begin(), pool.end(), [](const Match& a, const Match& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        if (a.index_a != b.index_a) return a.index_a < b.index_a;
        return a.index_b < b.index_b;
    });
    std::vector<Match> candidates;
    for (const Match& m : pool) {
        bool duplicate = false;
        for (const Match& kept : candidates) {
            if (std::hypot(m.ax - kept.ax, m.ay - kept.ay) < 1.0 &&
                std::hypot(m.bx - kept.bx, m.by - kept.by) < 1.0) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) candidates.push_back(m);
    }

    if (static_cast<int>(candidates.size()) < minimal_sample(cfg.matching.model))
        throw NoConsensusError("multiscale_match: candidate pool too small (" +
                                   std::to_string(candidates.size()) + " matches)",
                               0);

    FscResult fsc = fsc_filter(std::move(candidates), cfg.matching.model,
                               cfg.matching.inlier_tol, cfg.matching.iterations, cfg.seed);
    if (fsc.inlier_count < cfg.matching.min_inliers)
        throw NoConsensusError("multiscale_match: consensus of " +
                                   std::to_string(fsc.inlier_count) + " inliers is below minimum " +
                                   std::to_string(cfg.matching.min_inliers),
                               fsc.inlier_count);

    result.matches = std::move(fsc.matches);
    result.transform = fsc.transform;
    result.rmse = inlier_rmse(result.matches, result.transform);
    return result;
}

/// Full registration of a preprocessed-or-raw image pair.
inline MatchResult register_pair(const ImageGrid& img_a, const ImageGrid& img_b,
                                 const PipelineConfig& cfg, const DumpSink* dump_a = nullptr,
                                 const DumpSink* dump_b = nullptr) {
    if (img_a.width < 32 || img_a.height < 32 || img_b.width < 32 || img_b.height < 32)
        throw ContractError("register_pair: images must be at least 32x32");
    const Pyramid pyr_a = build_pyramid(preprocess(img_a), cfg.pyramid.n_levels,
                                        cfg.pyramid.scale_factor, cfg.pyramid.blur_sigma);
    const Pyramid pyr_b = build_pyramid(preprocess(img_b), cfg.pyramid.n_levels,
                                        cfg.pyramid.scale_factor, cfg.pyramid.blur_sigma);
    return multiscale_match(pyr_a, pyr_b, cfg, dump_a, dump_b);
}

}  // namespace mmreg
