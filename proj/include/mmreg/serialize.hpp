#pragma once

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "mmreg/errors.hpp"
#include "mmreg/matching.hpp"
#include "mmreg/transform.hpp"

namespace mmreg {

/// Write-temp-rename so partially written files never appear under the
/// final name.
inline void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open file for writing: " + tmp);
        out << text;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot move temp file into place: " + path);
}

inline nlohmann::json transform_to_json(const Transform& t, double rmse) {
    return {{"kind", to_string(t.kind)},
            {"matrix", t.m},
            {"rmse", rmse}};
}

inline void write_transform_json(const std::string& path, const Transform& t, double rmse) {
    write_text_atomic(path, transform_to_json(t, rmse).dump(2) + "\n");
}

struct TransformFile {
    Transform transform;
    double rmse = 0.0;
};

inline TransformFile read_transform_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
        TransformFile out;
        out.transform.kind = transform_kind_from_string(j.at("kind").get<std::string>());
        const auto mat = j.at("matrix");
        if (mat.size() != 9) throw ParseError("transform matrix must have 9 entries: " + path);
        for (int i = 0; i < 9; ++i) out.transform.m[i] = mat.at(i).get<double>();
        out.rmse = j.value("rmse", 0.0);
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("failed to parse transform JSON " + path + ": " + e.what());
    }
}

inline nlohmann::json keypoints_to_json(const std::vector<Keypoint>& kps) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Keypoint& kp : kps)
        arr.push_back({{"x", kp.x}, {"y", kp.y}, {"level", kp.level}, {"strength", kp.strength}});
    return arr;
}

inline void write_matches_json(const std::string& path, const MatchResult& result,
                               const std::string& config_hash) {
    nlohmann::json matches = nlohmann::json::array();
    for (const Match& m : result.matches)
        matches.push_back({{"ia", m.index_a},
                           {"ib", m.index_b},
                           {"distance", m.distance},
                           {"inlier", m.inlier}});
    const nlohmann::json j = {{"keypoints_a", keypoints_to_json(result.keypoints_a)},
                              {"keypoints_b", keypoints_to_json(result.keypoints_b)},
                              {"matches", matches},
                              {"config_hash", config_hash}};
    write_text_atomic(path, j.dump(2) + "\n");
}

struct MatchFile {
    std::vector<Keypoint> keypoints_a, keypoints_b;
    std::vector<Match> matches;
    std::string config_hash;
};

inline MatchFile read_matches_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
        MatchFile out;
        auto read_kps = [](const nlohmann::json& arr) {
            std::vector<Keypoint> kps;
            for (const auto& k : arr) {
                Keypoint kp;
                kp.x = k.at("x").get<double>();
                kp.y = k.at("y").get<double>();
                kp.level = k.at("level").get<int>();
                kp.strength = k.at("strength").get<double>();
                kps.push_back(kp);
            }
            return kps;
        };
        out.keypoints_a = read_kps(j.at("keypoints_a"));
        out.keypoints_b = read_kps(j.at("keypoints_b"));
        out.config_hash = j.value("config_hash", "");
        for (const auto& m : j.at("matches")) {
            Match match;
            match.index_a = m.at("ia").get<int>();
            match.index_b = m.at("ib").get<int>();
            match.distance = m.at("distance").get<double>();
            match.inlier = m.at("inlier").get<bool>();
            if (match.index_a < 0 || match.index_a >= static_cast<int>(out.keypoints_a.size()) ||
                match.index_b < 0 || match.index_b >= static_cast<int>(out.keypoints_b.size()))
                throw ParseError("match index out of range in " + path);
            match.ax = out.keypoints_a[match.index_a].x;
            match.ay = out.keypoints_a[match.index_a].y;
            match.bx = out.keypoints_b[match.index_b].x;
            match.by = out.keypoints_b[match.index_b].y;
            out.matches.push_back(match);
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("failed to parse matches JSON " + path + ": " + e.what());
    }
}

}  // namespace mmreg
