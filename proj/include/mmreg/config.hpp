#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mmreg/descriptor.hpp"
#include "mmreg/errors.hpp"
#include "mmreg/loggabor.hpp"
#include "mmreg/phase_congruency.hpp"
#include "mmreg/transform.hpp"

namespace mmreg {

struct PyramidConfig {
    int n_levels = 3;
    double scale_factor = 2.0;
    double blur_sigma = 1.0;
};

struct DetectorConfig {
    double window_sigma = 1.5;
    int nms_radius = 4;
    double threshold_quantile = 0.90;
    int max_points = 2000;
    int border = 0;  // 0 means auto: ceil of the largest filter wavelength
};

struct MatchingConfig {
    double ratio = 0.9;
    double inlier_tol = 2.0;
    int iterations = 2000;
    TransformKind model = TransformKind::similarity;
    double ncm_tol = 3.0;
    int level_gap = 1;
    int min_inliers = 5;  // minimal sample + 3 for the default similarity model
};

/// Every tunable of the pipeline, serializable as a flat key-value file
/// with dotted section keys. Unknown keys are rejected on parse.
struct PipelineConfig {
    PyramidConfig pyramid;
    BankParams bank;
    PcParams pc;
    DetectorConfig detector;
    std::vector<double> wpmom_sigmas = {2.0, 4.0, 6.0};
    DescriptorParams descriptor;
    MatchingConfig matching;
    std::uint64_t seed = 1;

    int effective_border(const BankParams& params) const {
        return detector.border > 0 ? detector.border
                                   : static_cast<int>(std::ceil(params.max_wavelength()));
    }
};

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ParseError("config: bad numeric value for " + key + ": '" + v + "'");
    }
    if (used != v.size()) throw ParseError("config: trailing junk in value for " + key);
    return out;
}

inline long long parse_int(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long long out = 0;
    try {
        out = std::stoll(v, &used);
    } catch (const std::exception&) {
        throw ParseError("config: bad integer value for " + key + ": '" + v + "'");
    }
    if (used != v.size()) throw ParseError("config: trailing junk in value for " + key);
    return out;
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw ParseError("config: empty list for " + key);
    return out;
}

}  // namespace detail

inline void apply_config_key(PipelineConfig& c, const std::string& key, const std::string& value) {
    using detail::parse_double;
    using detail::parse_double_list;
    using detail::parse_int;

    if (key == "pyramid.n_levels") c.pyramid.n_levels = static_cast<int>(parse_int(key, value));
    else if (key == "pyramid.scale_factor") c.pyramid.scale_factor = parse_double(key, value);
    else if (key == "pyramid.blur_sigma") c.pyramid.blur_sigma = parse_double(key, value);
    else if (key == "bank.n_scales") c.bank.n_scales = static_cast<int>(parse_int(key, value));
    else if (key == "bank.n_orients") c.bank.n_orients = static_cast<int>(parse_int(key, value));
    else if (key == "bank.min_wavelength") c.bank.min_wavelength = parse_double(key, value);
    else if (key == "bank.scale_mult") c.bank.scale_mult = parse_double(key, value);
    else if (key == "bank.sigma_on_f") c.bank.sigma_on_f = parse_double(key, value);
    else if (key == "bank.angular_sigma_ratio") c.bank.angular_sigma_ratio = parse_double(key, value);
    else if (key == "pc.noise_k") c.pc.noise_k = parse_double(key, value);
    else if (key == "pc.cutoff") c.pc.cutoff = parse_double(key, value);
    else if (key == "pc.gain") c.pc.gain = parse_double(key, value);
    else if (key == "pc.epsilon") c.pc.epsilon = parse_double(key, value);
    else if (key == "detector.window_sigma") c.detector.window_sigma = parse_double(key, value);
    else if (key == "detector.nms_radius") c.detector.nms_radius = static_cast<int>(parse_int(key, value));
    else if (key == "detector.threshold_quantile") c.detector.threshold_quantile = parse_double(key, value);
    else if (key == "detector.max_points") c.detector.max_points = static_cast<int>(parse_int(key, value));
    else if (key == "detector.border") c.detector.border = static_cast<int>(parse_int(key, value));
    else if (key == "wpmom.sigmas") c.wpmom_sigmas = parse_double_list(key, value);
    else if (key == "descriptor.n_rings") c.descriptor.n_rings = static_cast<int>(parse_int(key, value));
    else if (key == "descriptor.n_sectors") c.descriptor.n_sectors = static_cast<int>(parse_int(key, value));
    else if (key == "descriptor.n_bins") c.descriptor.n_bins = static_cast<int>(parse_int(key, value));
    else if (key == "descriptor.patch_radius") c.descriptor.patch_radius = parse_double(key, value);
    else if (key == "matching.ratio") c.matching.ratio = parse_double(key, value);
    else if (key == "matching.inlier_tol") c.matching.inlier_tol = parse_double(key, value);
    else if (key == "matching.iterations") c.matching.iterations = static_cast<int>(parse_int(key, value));
    else if (key == "matching.model") c.matching.model = transform_kind_from_string(value);
    else if (key == "matching.ncm_tol") c.matching.ncm_tol = parse_double(key, value);
    else if (key == "matching.level_gap") c.matching.level_gap = static_cast<int>(parse_int(key, value));
    else if (key == "matching.min_inliers") c.matching.min_inliers = static_cast<int>(parse_int(key, value));
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else throw ParseError("config: unknown key '" + key + "'");
}

inline PipelineConfig parse_config(std::istream& in) {
    PipelineConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config: line " + std::to_string(lineno) + " has no '='");
        apply_config_key(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return c;
}

inline PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    return parse_config(in);
}

inline std::string serialize_config(const PipelineConfig& c) {
    using detail::format_double;
    std::ostringstream out;
    out << "pyramid.n_levels = " << c.pyramid.n_levels << "\n";
    out << "pyramid.scale_factor = " << format_double(c.pyramid.scale_factor) << "\n";
    out << "pyramid.blur_sigma = " << format_double(c.pyramid.blur_sigma) << "\n";
    out << "bank.n_scales = " << c.bank.n_scales << "\n";
    out << "bank.n_orients = " << c.bank.n_orients << "\n";
    out << "bank.min_wavelength = " << format_double(c.bank.min_wavelength) << "\n";
    out << "bank.scale_mult = " << format_double(c.bank.scale_mult) << "\n";
    out << "bank.sigma_on_f = " << format_double(c.bank.sigma_on_f) << "\n";
    out << "bank.angular_sigma_ratio = " << format_double(c.bank.angular_sigma_ratio) << "\n";
    out << "pc.noise_k = " << format_double(c.pc.noise_k) << "\n";
    out << "pc.cutoff = " << format_double(c.pc.cutoff) << "\n";
    out << "pc.gain = " << format_double(c.pc.gain) << "\n";
    out << "pc.epsilon = " << format_double(c.pc.epsilon) << "\n";
    out << "detector.window_sigma = " << format_double(c.detector.window_sigma) << "\n";
    out << "detector.nms_radius = " << c.detector.nms_radius << "\n";
    out << "detector.threshold_quantile = " << format_double(c.detector.threshold_quantile) << "\n";
    out << "detector.max_points = " << c.detector.max_points << "\n";
    out << "detector.border = " << c.detector.border << "\n";
    out << "wpmom.sigmas = ";
    for (std::size_t i = 0; i < c.wpmom_sigmas.size(); ++i)
        out << (i ? "," : "") << format_double(c.wpmom_sigmas[i]);
    out << "\n";
    out << "descriptor.n_rings = " << c.descriptor.n_rings << "\n";
    out << "descriptor.n_sectors = " << c.descriptor.n_sectors << "\n";
    out << "descriptor.n_bins = " << c.descriptor.n_bins << "\n";
    out << "descriptor.patch_radius = " << format_double(c.descriptor.patch_radius) << "\n";
    out << "matching.ratio = " << format_double(c.matching.ratio) << "\n";
    out << "matching.inlier_tol = " << format_double(c.matching.inlier_tol) << "\n";
    out << "matching.iterations = " << c.matching.iterations << "\n";
    out << "matching.model = " << to_string(c.matching.model) << "\n";
    out << "matching.ncm_tol = " << format_double(c.matching.ncm_tol) << "\n";
    out << "matching.level_gap = " << c.matching.level_gap << "\n";
    out << "matching.min_inliers = " << c.matching.min_inliers << "\n";
    out << "seed = " << c.seed << "\n";
    return out.str();
}

/// FNV-1a 64-bit over the serialized config, as 16 hex digits.
inline std::string config_hash(const PipelineConfig& c) {
    const std::string text = serialize_config(c);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace mmreg
