#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "emofuse/errors.hpp"
#include "emofuse/features.hpp"
#include "test_util.hpp"

using namespace emofuse;
using testutil::template_face;

namespace {

constexpr double pi = std::numbers::pi;

AlignedLandmarks aligned_template() { return align(template_face()); }

AlignedLandmarks from_points(const std::array<Point2, kLandmarkCount>& pts) {
    AlignedLandmarks al;
    al.points = pts;
    return al;
}

}  // namespace

TEST_CASE("pair_index enumerates all pairs exactly once") {
    std::set<int> seen;
    for (int i = 0; i < kLandmarkCount; ++i) {
        for (int j = i + 1; j < kLandmarkCount; ++j) {
            const int pos = pair_index(i, j);
            REQUIRE(pos >= 0);
            REQUIRE(pos < kDistanceCount);
            REQUIRE(seen.insert(pos).second);
        }
    }
    CHECK(seen.size() == static_cast<std::size_t>(kDistanceCount));
    CHECK(pair_index(0, 1) == 0);
    CHECK(pair_index(66, 67) == kDistanceCount - 1);
}

TEST_CASE("pairwise_distances") {
    SUBCASE("emits exactly 2278 values") {
        CHECK(pairwise_distances(aligned_template()).size() == 2278);
    }

    SUBCASE("all-coincident points give all-zero distances") {
        std::array<Point2, kLandmarkCount> pts;
        pts.fill({100.0, 100.0});
        for (double d : pairwise_distances(from_points(pts))) CHECK(d == 0.0);
    }

    SUBCASE("first entry is the distance between points 0 and 1") {
        AlignedLandmarks al = aligned_template();
        al.points[0] = {0.0, 0.0};
        al.points[1] = {3.0, 4.0};
        CHECK(pairwise_distances(al)[0] == doctest::Approx(5.0).epsilon(1e-12));
    }

    SUBCASE("distances are invariant under rotation and translation") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> coord(0.0, 200.0);
        std::uniform_real_distribution<double> angle(-pi, pi);
        for (int iter = 0; iter < 10; ++iter) {
            LandmarkSet lm;
            lm.src_width = lm.src_height = 200;
            for (Point2& p : lm.points) p = {coord(rng), coord(rng)};
            const auto before = pairwise_distances(from_points(lm.points));
            LandmarkSet moved = rotate(lm, angle(rng), {coord(rng), coord(rng)});
            const double tx = coord(rng) - 100.0, ty = coord(rng) - 100.0;
            for (Point2& p : moved.points) {
                p.x += tx;
                p.y += ty;
            }
            const auto after = pairwise_distances(from_points(moved.points));
            for (int k = 0; k < kDistanceCount; ++k) {
                REQUIRE(std::abs(before[k] - after[k]) <= 1e-9);
            }
        }
    }
}

TEST_CASE("facial_angles computes the interior angle at the vertex") {
    std::array<Point2, kLandmarkCount> pts = template_face().points;
    const std::vector<AngleSpec> one = {{"probe", 10, 11, 12, FaceRegion::outline}};

    pts[11] = {0.0, 0.0};
    pts[10] = {1.0, 0.0};
    pts[12] = {0.0, 1.0};
    CHECK(facial_angles(from_points(pts), one)[0] == doctest::Approx(pi / 2).epsilon(1e-12));

    pts[12] = {-1.0, 0.0};  // collinear, opposite sides
    CHECK(facial_angles(from_points(pts), one)[0] == doctest::Approx(pi).epsilon(1e-12));

    pts[12] = {2.0, 0.0};  // same direction
    CHECK(facial_angles(from_points(pts), one)[0] == 0.0);

    pts[12] = {0.0, 0.0};  // zero-length ray
    CHECK_THROWS_AS(facial_angles(from_points(pts), one), GeometryError);
}

TEST_CASE("angles are invariant under rotation, translation and uniform scale") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> angle(-pi, pi);
    std::uniform_real_distribution<double> scale(0.25, 4.0);
    std::uniform_real_distribution<double> shift(-50.0, 50.0);
    const auto& table = default_angle_table();
    for (int iter = 0; iter < 10; ++iter) {
        const LandmarkSet face = testutil::jittered_face(rng);
        const auto before = facial_angles(from_points(face.points), table);
        LandmarkSet moved = rotate(face, angle(rng), {100.0, 100.0});
        const double s = scale(rng), tx = shift(rng), ty = shift(rng);
        for (Point2& p : moved.points) p = {p.x * s + tx, p.y * s + ty};
        const auto after = facial_angles(from_points(moved.points), table);
        for (int k = 0; k < kAngleCount; ++k) {
            REQUIRE(std::abs(before[k] - after[k]) <= 1e-9);
        }
    }
}

TEST_CASE("default angle table matches the canonical region layout") {
    const auto& table = default_angle_table();
    REQUIRE(table.size() == 29);
    validate_angle_table(table);

    std::array<int, 5> counts{};
    for (const AngleSpec& s : table) counts[static_cast<int>(s.region)]++;
    CHECK(counts[static_cast<int>(FaceRegion::outline)] == 9);
    CHECK(counts[static_cast<int>(FaceRegion::brow)] == 6);
    CHECK(counts[static_cast<int>(FaceRegion::eye)] == 6);
    CHECK(counts[static_cast<int>(FaceRegion::mouth)] == 7);
    CHECK(counts[static_cast<int>(FaceRegion::nose)] == 1);

    // The one nose angle opens from the tip towards the nostril corners.
    const AngleSpec& nose = table.back();
    CHECK(nose.vertex == 33);
    CHECK(nose.a == 31);
    CHECK(nose.b == 35);
}

TEST_CASE("validate_angle_table rejects malformed tables") {
    auto table = default_angle_table();
    table.pop_back();
    CHECK_THROWS_AS(validate_angle_table(table), ValidationError);

    table = default_angle_table();
    table[0].a = table[0].vertex;
    CHECK_THROWS_AS(validate_angle_table(table), ValidationError);

    table = default_angle_table();
    table[3].a = 68;
    CHECK_THROWS_AS(validate_angle_table(table), ValidationError);

    table = default_angle_table();
    table[5].region = FaceRegion::nose;  // region counts off
    CHECK_THROWS_AS(validate_angle_table(table), ValidationError);
}

TEST_CASE("featurize concatenates distances and angles") {
    const auto& table = default_angle_table();
    const AlignedLandmarks al = aligned_template();
    const auto fv = featurize(al, table);
    REQUIRE(fv.size() == 2307);

    const auto dist = pairwise_distances(al);
    const auto ang = facial_angles(al, table);
    for (int k = 0; k < kDistanceCount; ++k) REQUIRE(fv[k] == dist[k]);
    for (int k = 0; k < kAngleCount; ++k) REQUIRE(fv[kDistanceCount + k] == ang[k]);

    // Raw ranges: distances non-negative, angles within [0, pi].
    for (int k = 0; k < kDistanceCount; ++k) REQUIRE(fv[k] >= 0.0);
    for (int k = 0; k < kAngleCount; ++k) {
        REQUIRE(fv[kDistanceCount + k] >= 0.0);
        REQUIRE(fv[kDistanceCount + k] <= pi);
    }
}

TEST_CASE("featurize is deterministic and alignment-canonical") {
    const auto& table = default_angle_table();
    const auto a = featurize(align(template_face()), table);
    const auto b = featurize(align(template_face()), table);
    CHECK(a == b);

    const LandmarkSet moved = testutil::transformed(template_face(), 0.25, 1.7, 12.0, 8.0, 340, 340);
    const auto c = featurize(align(moved), table);
    for (int k = 0; k < kFeatureCount; ++k) REQUIRE(std::abs(a[k] - c[k]) <= 1e-6);
}

TEST_CASE("fit_stats computes per-coordinate mean and population stddev") {
    SUBCASE("single vector: mean is the vector, stddev zero") {
        const std::vector<double> v = {1.0, -2.0, 3.5};
        const FeatureStats stats = fit_stats({v});
        CHECK(stats.mean == v);
        CHECK(stats.stddev == std::vector<double>{0.0, 0.0, 0.0});
        CHECK(stats.n_fit == 1);
    }

    SUBCASE("v and -v: mean zero, stddev |v|") {
        const std::vector<double> v = {1.0, -2.0, 0.5};
        std::vector<double> neg = v;
        for (double& x : neg) x = -x;
        const FeatureStats stats = fit_stats({v, neg});
        CHECK(stats.n_fit == 2);
        for (int k = 0; k < 3; ++k) {
            CHECK(stats.mean[k] == 0.0);
            CHECK(stats.stddev[k] == doctest::Approx(std::abs(v[k])).epsilon(1e-12));
        }
    }

    SUBCASE("empty collection is rejected") {
        CHECK_THROWS_AS(fit_stats({}), ValidationError);
    }
}

TEST_CASE("standardize z-scores against the fitted statistics") {
    FeatureStats stats;
    stats.mean = {10.0, 4.0, 7.0};
    stats.stddev = {2.0, 0.0, 1.0};
    stats.n_fit = 5;

    SUBCASE("value 16 with mean 10 and stddev 2 maps to 3") {
        const auto out = standardize({16.0, 99.0, 7.0}, stats);
        CHECK(out[0] == 3.0);
        CHECK(out[1] == 0.0);  // constant feature maps to 0 regardless of value
        CHECK(out[2] == 0.0);
    }

    SUBCASE("the mean standardizes to zero") {
        const auto out = standardize(stats.mean, stats);
        CHECK(out == std::vector<double>{0.0, 0.0, 0.0});
    }

    SUBCASE("length mismatch is rejected") {
        CHECK_THROWS_AS(standardize({1.0}, stats), ValidationError);
    }
}

TEST_CASE("standardized training collections have mean 0 and stddev 1") {
    std::mt19937_64 rng(23);
    const auto& table = default_angle_table();
    std::vector<std::vector<double>> features;
    for (int i = 0; i < 12; ++i) {
        features.push_back(featurize(align(testutil::jittered_face(rng)), table));
    }
    const FeatureStats stats = fit_stats(features);
    std::vector<std::vector<double>> standardized;
    for (const auto& fv : features) standardized.push_back(standardize(fv, stats));
    const FeatureStats post = fit_stats(standardized);
    for (int k = 0; k < kFeatureCount; ++k) {
        REQUIRE(std::abs(post.mean[k]) <= 1e-9);
        if (!stats.is_constant(k)) {
            REQUIRE(std::abs(post.stddev[k] - 1.0) <= 1e-9);
        }
    }
}
