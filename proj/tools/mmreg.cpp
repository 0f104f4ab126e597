#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "mmreg/config.hpp"
#include "mmreg/image_io.hpp"
#include "mmreg/pipeline.hpp"
#include "mmreg/render.hpp"
#include "mmreg/serialize.hpp"
#include "mmreg/synth.hpp"

namespace fs = std::filesystem;
using namespace mmreg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNoConsensus = 2;

void save_png16_atomic(const ImageGrid& img, const std::string& path) {
    const std::string tmp = path + ".tmp";
    save_png16(img, tmp);
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot move temp file into place: " + path);
}

void save_png8_rgb_atomic(const RgbImage& img, const std::string& path) {
    const std::string tmp = path + ".tmp";
    save_png8_rgb(img.r, img.g, img.b, tmp);
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot move temp file into place: " + path);
}

struct MatchArgs {
    std::string image_a, image_b, config_path, out_dir, model;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool debug_dumps = false;
};

int run_match(const MatchArgs& args) {
    PipelineConfig cfg;
    if (!args.config_path.empty()) cfg = load_config(args.config_path);
    if (!args.model.empty()) cfg.matching.model = transform_kind_from_string(args.model);
    if (args.seed_set) cfg.seed = args.seed;

    const ImageGrid raw_a = load_image(args.image_a);
    const ImageGrid raw_b = load_image(args.image_b);
    const ImageGrid img_a = preprocess(raw_a);
    const ImageGrid img_b = preprocess(raw_b);

    fs::create_directories(args.out_dir);
    DumpSink dump_a, dump_b;
    if (args.debug_dumps) {
        fs::create_directories(fs::path(args.out_dir) / "debug");
        auto make_sink = [&](const std::string& tag) {
            return DumpSink([out = args.out_dir, tag](int level, const std::string& name,
                                                      const ImageGrid& grid) {
                const std::string file = (fs::path(out) / "debug" /
                                          (tag + "_L" + std::to_string(level) + "_" + name + ".png"))
                                             .string();
                save_png16_atomic(grid, file);
            });
        };
        dump_a = make_sink("a");
        dump_b = make_sink("b");
    }

    const MatchResult result = register_pair(img_a, img_b, cfg, args.debug_dumps ? &dump_a : nullptr,
                                             args.debug_dumps ? &dump_b : nullptr);

    const fs::path out(args.out_dir);
    write_matches_json((out / "matches.json").string(), result, config_hash(cfg));
    write_transform_json((out / "transform.json").string(), result.transform, result.rmse);
    save_png8_rgb_atomic(render_overlay(img_a, img_b, result.matches),
                         (out / "overlay.png").string());
    save_png16_atomic(render_checkerboard(img_a, img_b, result.transform),
                      (out / "checkerboard.png").string());

    int inliers = 0;
    for (const Match& m : result.matches) inliers += m.inlier ? 1 : 0;
    std::cout << "matches: " << result.matches.size() << ", inliers: " << inliers
              << ", rmse: " << result.rmse << " px\n";
    return kExitOk;
}

struct EvalArgs {
    std::string matches_path, ground_truth_path;
    double tol = 3.0;
};

int run_eval(const EvalArgs& args) {
    const MatchFile mf = read_matches_json(args.matches_path);
    const TransformFile gt = read_transform_json(args.ground_truth_path);

    const int ncm = compute_ncm(mf.matches, gt.transform, args.tol);

    std::vector<double> residuals;
    double inlier_acc = 0.0;
    int inlier_n = 0;
    for (const Match& m : mf.matches) {
        const double r = residual(gt.transform, {m.ax, m.ay, m.bx, m.by});
        residuals.push_back(r);
        if (m.inlier) {
            inlier_acc += r * r;
            ++inlier_n;
        }
    }
    std::sort(residuals.begin(), residuals.end());
    auto quantile = [&](double q) {
        if (residuals.empty()) return 0.0;
        const double pos = q * static_cast<double>(residuals.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        if (i + 1 >= residuals.size()) return residuals.back();
        return residuals[i] + (residuals[i + 1] - residuals[i]) * (pos - i);
    };

    const nlohmann::json j = {
        {"ncm", ncm},
        {"n_matches", mf.matches.size()},
        {"n_inliers", inlier_n},
        {"inlier_rmse", inlier_n > 0 ? std::sqrt(inlier_acc / inlier_n) : 0.0},
        {"residual_quantiles",
         {{"p25", quantile(0.25)}, {"p50", quantile(0.50)}, {"p75", quantile(0.75)}, {"p90", quantile(0.90)}}},
        {"tol", args.tol}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

struct SynthArgs {
    std::string image, out_dir, distortion = "none";
    double rotation = 0.0, scale = 1.0, tx = 0.0, ty = 0.0, cx = 0.0, cy = 0.0;
    double gain = 1.0, bias = 0.0, gamma = 1.0, blur = 0.0, downsample = 1.0;
};

int run_synth(const SynthArgs& args) {
    const ImageGrid img = load_image(args.image);
    const Transform gt = make_similarity(args.rotation, args.scale, args.tx, args.ty, args.cx, args.cy);
    if (std::abs(gt.det2x2()) <= 1e-12) throw ParameterError("synth: degenerate warp (scale ~ 0)");

    DistortionSpec spec;
    spec.kind = distortion_kind_from_string(args.distortion);
    spec.gain = args.gain;
    spec.bias = args.bias;
    spec.gamma = args.gamma;
    spec.blur_sigma = args.blur;
    spec.downsample = args.downsample;

    const ImageGrid result = distort_image(warp_image(img, gt), spec);

    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    save_png16_atomic(result, (out / "synth.png").string());
    write_transform_json((out / "ground_truth.json").string(), gt, 0.0);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-modal image registration: phase-congruency keypoints, "
                 "LogGabor WPMOM features, GGLOH descriptors, multi-scale matching"};
    app.require_subcommand(1);

    MatchArgs match_args;
    CLI::App* match = app.add_subcommand("match", "register an image pair");
    match->add_option("image_a", match_args.image_a, "reference image (PNG or TIFF)")->required();
    match->add_option("image_b", match_args.image_b, "moving image (PNG or TIFF)")->required();
    match->add_option("--out", match_args.out_dir, "output directory")->required();
    match->add_option("--config", match_args.config_path, "pipeline config file");
    match->add_option("--model", match_args.model, "transform model")
        ->check(CLI::IsMember({"similarity", "affine", "projective"}));
    match->add_option("--seed", match_args.seed, "consensus RNG seed")
        ->each([&](const std::string&) { match_args.seed_set = true; });
    match->add_flag("--debug-dumps", match_args.debug_dumps, "write intermediate maps as 16-bit PNGs");

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "score matches against a ground-truth transform");
    eval->add_option("--matches", eval_args.matches_path, "matches.json")->required();
    eval->add_option("--ground-truth", eval_args.ground_truth_path, "transform JSON")->required();
    eval->add_option("--tol", eval_args.tol, "correctness tolerance in pixels");

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a warped, distorted copy with ground truth");
    synth->add_option("image", synth_args.image, "source image")->required();
    synth->add_option("--out", synth_args.out_dir, "output directory")->required();
    synth->add_option("--rotation", synth_args.rotation, "degrees");
    synth->add_option("--scale", synth_args.scale, "similarity scale");
    synth->add_option("--tx", synth_args.tx, "translation x");
    synth->add_option("--ty", synth_args.ty, "translation y");
    synth->add_option("--cx", synth_args.cx, "warp center x (default origin)");
    synth->add_option("--cy", synth_args.cy, "warp center y");
    synth->add_option("--distortion", synth_args.distortion, "none|affine|invert|gamma");
    synth->add_option("--gain", synth_args.gain, "affine intensity gain");
    synth->add_option("--bias", synth_args.bias, "affine intensity bias");
    synth->add_option("--gamma", synth_args.gamma, "gamma exponent");
    synth->add_option("--blur", synth_args.blur, "Gaussian blur sigma (gamma case)");
    synth->add_option("--downsample", synth_args.downsample, "resolution-loss factor (gamma case)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*match) return run_match(match_args);
        if (*eval) return run_eval(eval_args);
        if (*synth) return run_synth(synth_args);
    } catch (const NoConsensusError& e) {
        std::cerr << "no consensus: " << e.what() << "\n";
        return kExitNoConsensus;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
