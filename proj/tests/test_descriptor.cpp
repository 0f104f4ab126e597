#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "helpers.hpp"
#include "mmreg/descriptor.hpp"
#include "mmreg/phase_congruency.hpp"
#include "mmreg/synth.hpp"

using namespace mmreg;

namespace {

struct MiniPipeline {
    OrientationMap omap;
    std::vector<Keypoint> keypoints;
};

MiniPipeline run_mini(const ImageGrid& img) {
    const FilterBank bank = build_filter_bank(img.width, img.height, BankParams{});
    const BankResponse resp = filter_image(img, bank);
    const PhaseCongruencyField pcf = phase_congruency(resp, PcParams{});
    std::vector<double> orients;
    for (int o = 0; o < bank.params.n_orients; ++o) orients.push_back(bank.params.orientation(o));
    const MomentMaps mm = moment_maps(pcf, orients);
    const CornernessField corner = cornerness_map(mm.m_combined, 1.5);
    MiniPipeline out;
    out.omap = wpmom_map_from_gradients(loggabor_gradients(resp, bank.params), {2.0, 4.0, 6.0});
    out.keypoints = detect_keypoints(corner, 0.9, 4, 500, 28);
    return out;
}

double cosine_similarity(const Descriptor& a, const Descriptor& b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.vector.size(); ++i)
        dot += static_cast<double>(a.vector[i]) * b.vector[i];
    return dot;
}

double descriptor_distance(const Descriptor& a, const Descriptor& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.vector.size(); ++i) {
        const double d = static_cast<double>(a.vector[i]) - b.vector[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("reference orientation is a direct map read") {
    OrientationMap omap;
    omap.theta = Field(10, 10, std::numbers::pi / 6.0);
    Keypoint kp;
    kp.x = 4;
    kp.y = 5;
    const Keypoint out = assign_reference_orientation(kp, omap);
    CHECK(out.reference_orientation == Catch::Approx(std::numbers::pi / 6.0));

    // flat region: the angle(0,0) = 0 rule propagates
    OrientationMap flat;
    flat.theta = Field(10, 10, 0.0);
    CHECK(assign_reference_orientation(kp, flat).reference_orientation == 0.0);

    // two keypoints at the same pixel read identical references
    Keypoint kp2 = kp;
    CHECK(assign_reference_orientation(kp, omap).reference_orientation ==
          assign_reference_orientation(kp2, omap).reference_orientation);

    Keypoint outside;
    outside.x = 99;
    outside.y = 0;
    CHECK_THROWS_AS(assign_reference_orientation(outside, omap), ContractError);
}

TEST_CASE("descriptors have unit norm, nonnegative entries, documented length") {
    const ImageGrid img = test_helpers::make_structured_image(128, 128, 41);
    const MiniPipeline mini = run_mini(img);
    REQUIRE(!mini.keypoints.empty());

    DescriptorParams params;
    REQUIRE(params.length() == 204);  // (1 + 2*8) cells * 12 bins
    const DescribeResult res = describe_all(mini.keypoints, mini.omap, params);
    REQUIRE(!res.descriptors.empty());
    for (const Descriptor& d : res.descriptors) {
        REQUIRE(static_cast<int>(d.vector.size()) == params.length());
        double norm = 0.0;
        for (float v : d.vector) {
            REQUIRE(v >= 0.0f);
            norm += static_cast<double>(v) * v;
        }
        CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-6);
    }
}

TEST_CASE("identical input gives identical descriptors") {
    const ImageGrid img = test_helpers::make_structured_image(96, 96, 12);
    const MiniPipeline mini = run_mini(img);
    REQUIRE(!mini.keypoints.empty());
    const Keypoint kp = assign_reference_orientation(mini.keypoints[0], mini.omap);
    const auto d1 = extract_descriptor(kp, mini.omap, DescriptorParams{});
    const auto d2 = extract_descriptor(kp, mini.omap, DescriptorParams{});
    REQUIRE(d1.has_value());
    REQUIRE(d2.has_value());
    CHECK(descriptor_distance(*d1, *d2) == 0.0);
}

TEST_CASE("intensity inversion leaves descriptors unchanged") {
    const ImageGrid img = test_helpers::make_structured_image(128, 128, 33);
    ImageGrid inverted = img;
    for (float& v : inverted.data) v = 1.0f - v;

    const MiniPipeline a = run_mini(img);
    const MiniPipeline b = run_mini(inverted);
    REQUIRE(!a.keypoints.empty());

    int compared = 0;
    for (std::size_t i = 0; i < std::min<std::size_t>(a.keypoints.size(), 5); ++i) {
        const Keypoint ka = assign_reference_orientation(a.keypoints[i], a.omap);
        Keypoint kb_probe = a.keypoints[i];  // same pixel on the inverted image
        const Keypoint kb = assign_reference_orientation(kb_probe, b.omap);
        const auto da = extract_descriptor(ka, a.omap, DescriptorParams{});
        const auto db = extract_descriptor(kb, b.omap, DescriptorParams{});
        if (!da || !db) continue;
        CHECK(descriptor_distance(*da, *db) < 1e-5);
        ++compared;
    }
    REQUIRE(compared > 0);
}

TEST_CASE("rotation covariance of reference orientation and descriptor") {
    const ImageGrid img = test_helpers::make_structured_image(160, 160, 27);
    const MiniPipeline base = run_mini(img);
    REQUIRE(!base.keypoints.empty());

    // strongest keypoint near the center so the rotated patch stays valid
    Keypoint center_kp;
    bool found = false;
    for (const Keypoint& kp : base.keypoints) {
        if (std::abs(kp.x - 80) < 25 && std::abs(kp.y - 80) < 25) {
            center_kp = kp;
            found = true;
            break;
        }
    }
    REQUIRE(found);

    const Keypoint ref_kp = assign_reference_orientation(center_kp, base.omap);
    const auto base_desc = extract_descriptor(ref_kp, base.omap, DescriptorParams{});
    REQUIRE(base_desc.has_value());

    for (double deg : {15.0, 30.0, 45.0}) {
        const Transform rot = make_similarity(deg, 1.0, 0.0, 0.0, center_kp.x, center_kp.y);
        const ImageGrid rotated = warp_image(img, rot);
        const MiniPipeline rmini = run_mini(rotated);

        Keypoint probe = center_kp;  // rotation fixes this point
        const Keypoint rot_kp = assign_reference_orientation(probe, rmini.omap);

        const double phi = deg * std::numbers::pi / 180.0;
        const double shift = wrap_half_angle(rot_kp.reference_orientation -
                                             ref_kp.reference_orientation - phi);
        INFO("rotation " << deg);
        CHECK(std::abs(shift) < 0.1);

        const auto rot_desc = extract_descriptor(rot_kp, rmini.omap, DescriptorParams{});
        REQUIRE(rot_desc.has_value());
        CHECK(cosine_similarity(*base_desc, *rot_desc) >= 0.9);
    }
}

TEST_CASE("describe_all handles empty input and border discards") {
    OrientationMap omap;
    omap.theta = Field(64, 64, 0.2);

    CHECK(describe_all({}, omap, DescriptorParams{}).descriptors.empty());

    // all keypoints hug the edges: every patch leaves the image
    std::vector<Keypoint> edge_kps;
    for (double x : {1.0, 62.0}) {
        Keypoint kp;
        kp.x = x;
        kp.y = 5;
        edge_kps.push_back(kp);
    }
    DescriptorParams small;
    small.patch_radius = 20.0;
    const DescribeResult res = describe_all(edge_kps, omap, small);
    CHECK(res.descriptors.empty());
    REQUIRE(res.discarded.size() == 2);
    CHECK(res.discarded[0] == 0);
    CHECK(res.discarded[1] == 1);
}

TEST_CASE("describe_all preserves input order") {
    const ImageGrid img = test_helpers::make_structured_image(128, 128, 55);
    const MiniPipeline mini = run_mini(img);
    REQUIRE(mini.keypoints.size() >= 3);
    const DescribeResult res = describe_all(mini.keypoints, mini.omap, DescriptorParams{});
    REQUIRE(res.descriptors.size() == res.keypoints.size());
    // kept descriptors appear in the same order as their source keypoints
    std::size_t cursor = 0;
    for (const Descriptor& d : res.descriptors) {
        while (cursor < mini.keypoints.size() &&
               (mini.keypoints[cursor].x != d.x || mini.keypoints[cursor].y != d.y))
            ++cursor;
        REQUIRE(cursor < mini.keypoints.size());
    }
}
