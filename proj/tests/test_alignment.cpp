#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "emofuse/alignment.hpp"
#include "emofuse/errors.hpp"
#include "test_util.hpp"

using namespace emofuse;
using testutil::template_face;
using testutil::transformed;

namespace {

constexpr double pi = std::numbers::pi;

LandmarkSet as_landmarks(const AlignedLandmarks& al) {
    LandmarkSet lm;
    lm.points = al.points;
    lm.src_width = 200;
    lm.src_height = 200;
    return lm;
}

double max_coord_delta(const std::array<Point2, kLandmarkCount>& a,
                       const std::array<Point2, kLandmarkCount>& b) {
    double m = 0.0;
    for (int i = 0; i < kLandmarkCount; ++i) {
        m = std::max(m, std::abs(a[i].x - b[i].x));
        m = std::max(m, std::abs(a[i].y - b[i].y));
    }
    return m;
}

}  // namespace

TEST_CASE("resize_to_canvas maps coordinates through the affine map") {
    LandmarkSet lm = template_face();
    lm.src_width = 400;
    lm.src_height = 400;
    lm.points[0] = {100.0, 100.0};
    CHECK(resize_to_canvas(lm).points[0].x == 50.0);
    CHECK(resize_to_canvas(lm).points[0].y == 50.0);

    LandmarkSet identity = template_face();
    identity.points[5] = {37.0, 81.0};
    const LandmarkSet same = resize_to_canvas(identity);
    CHECK(same.points[5].x == 37.0);
    CHECK(same.points[5].y == 81.0);

    LandmarkSet stretched = template_face();
    stretched.src_width = 100;
    stretched.src_height = 400;
    stretched.points[7] = {10.0, 20.0};
    const LandmarkSet mapped = resize_to_canvas(stretched);
    CHECK(mapped.points[7].x == 20.0);
    CHECK(mapped.points[7].y == 10.0);
    CHECK(mapped.src_width == 200);
    CHECK(mapped.src_height == 200);
}

TEST_CASE("resize_to_canvas rejects non-positive dimensions") {
    LandmarkSet lm = template_face();
    lm.src_width = 0;
    CHECK_THROWS_AS(resize_to_canvas(lm), ValidationError);
    lm.src_width = 200;
    lm.src_height = -3;
    CHECK_THROWS_AS(resize_to_canvas(lm), ValidationError);
}

TEST_CASE("center_on_nose translates the whole set onto the canvas center") {
    LandmarkSet lm = template_face();
    lm.points[kNoseTip] = {90.0, 110.0};
    lm.points[0] = {10.0, 10.0};
    const LandmarkSet centered = center_on_nose(lm);
    CHECK(centered.points[0].x == 20.0);
    CHECK(centered.points[0].y == 0.0);
    CHECK(centered.points[kNoseTip].x == 100.0);
    CHECK(centered.points[kNoseTip].y == 100.0);

    LandmarkSet already = template_face();
    already.points[kNoseTip] = {100.0, 100.0};
    const LandmarkSet unchanged = center_on_nose(already);
    CHECK(max_coord_delta(unchanged.points, already.points) == 0.0);
}

TEST_CASE("roll_angle measures tilt of the nose line against the vertical") {
    LandmarkSet lm = template_face();
    lm.points[kNoseTip] = {100.0, 100.0};

    lm.points[kNoseBridge] = {100.0, 50.0};
    CHECK(roll_angle(lm) == 0.0);

    lm.points[kNoseBridge] = {150.0, 50.0};
    CHECK(roll_angle(lm) == doctest::Approx(pi / 4).epsilon(1e-12));

    lm.points[kNoseBridge] = {50.0, 100.0};
    CHECK(roll_angle(lm) == doctest::Approx(-pi / 2).epsilon(1e-12));

    lm.points[kNoseBridge] = {100.0, 100.0};
    CHECK_THROWS_AS(roll_angle(lm), GeometryError);
}

TEST_CASE("rotate is the plane rotation about the pivot") {
    LandmarkSet lm = template_face();
    lm.points[10] = {150.0, 100.0};
    const LandmarkSet quarter = rotate(lm, pi / 2, {100.0, 100.0});
    CHECK(quarter.points[10].x == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(quarter.points[10].y == doctest::Approx(150.0).epsilon(1e-12));

    const LandmarkSet unchanged = rotate(lm, 0.0, {100.0, 100.0});
    CHECK(max_coord_delta(unchanged.points, lm.points) == 0.0);
}

TEST_CASE("rotate composed with its inverse returns the original set") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int iter = 0; iter < 20; ++iter) {
        const LandmarkSet lm = testutil::jittered_face(rng);
        const double theta = angle(rng);
        const LandmarkSet back =
            rotate(rotate(lm, theta, {100.0, 100.0}), -theta, {100.0, 100.0});
        CHECK(max_coord_delta(back.points, lm.points) <= 1e-9);
    }
}

TEST_CASE("rotation preserves all pairwise distances") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-pi, pi);
    std::uniform_real_distribution<double> coord(0.0, 200.0);
    for (int iter = 0; iter < 20; ++iter) {
        LandmarkSet lm;
        lm.src_width = lm.src_height = 200;
        for (Point2& p : lm.points) p = {coord(rng), coord(rng)};
        const LandmarkSet turned = rotate(lm, angle(rng), {coord(rng), coord(rng)});
        for (int i = 0; i < kLandmarkCount; ++i) {
            for (int j = i + 1; j < kLandmarkCount; ++j) {
                const double before = std::hypot(lm.points[j].x - lm.points[i].x,
                                                 lm.points[j].y - lm.points[i].y);
                const double after = std::hypot(turned.points[j].x - turned.points[i].x,
                                                turned.points[j].y - turned.points[i].y);
                REQUIRE(std::abs(before - after) <= 1e-9);
            }
        }
    }
}

TEST_CASE("scale_normalize fixes nose length and eye width") {
    const AlignedLandmarks canonical = align(template_face());
    const LandmarkSet as_lm = as_landmarks(canonical);

    SUBCASE("input already at the targets is unchanged") {
        const AlignedLandmarks again = scale_normalize(as_lm);
        CHECK(max_coord_delta(again.points, canonical.points) <= 1e-9);
        CHECK(again.scale_x == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(again.scale_y == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("nose length 100 with target 50 gives scale_y one half") {
        LandmarkSet lm = as_lm;
        for (Point2& p : lm.points) p.y = 100.0 + (p.y - 100.0) * 2.0;  // nose now 100 long
        const AlignedLandmarks scaled = scale_normalize(lm);
        CHECK(scaled.scale_y == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("postcondition holds by construction") {
        std::mt19937_64 rng(3);
        for (int iter = 0; iter < 10; ++iter) {
            LandmarkSet lm = as_lm;
            std::uniform_real_distribution<double> stretch(0.3, 3.0);
            const double sx = stretch(rng), sy = stretch(rng);
            for (Point2& p : lm.points) {
                p.x = 100.0 + (p.x - 100.0) * sx;
                p.y = 100.0 + (p.y - 100.0) * sy;
            }
            const AlignedLandmarks out = scale_normalize(lm);
            const double nose = std::hypot(out.points[kNoseBridge].x - out.points[kNoseTip].x,
                                           out.points[kNoseBridge].y - out.points[kNoseTip].y);
            CHECK(std::abs(nose - 50.0) <= 1e-9);
            CHECK(std::abs(std::abs(out.points[kLeftEyeInner].x - out.points[kLeftEyeOuter].x) -
                           30.0) <= 1e-9);
        }
    }

    SUBCASE("degenerate geometry is rejected") {
        LandmarkSet flat = as_lm;
        for (Point2& p : flat.points) p.y = 100.0;  // zero nose length, bridge on tip
        CHECK_THROWS_AS(scale_normalize(flat), GeometryError);

        LandmarkSet no_eye = as_lm;
        no_eye.points[kLeftEyeOuter].x = no_eye.points[kLeftEyeInner].x;
        CHECK_THROWS_AS(scale_normalize(no_eye), GeometryError);
    }

    SUBCASE("precondition violations are rejected") {
        LandmarkSet off_center = as_lm;
        for (Point2& p : off_center.points) p.x += 5.0;
        CHECK_THROWS_AS(scale_normalize(off_center), ValidationError);

        const LandmarkSet tilted = rotate(as_lm, 0.05, {100.0, 100.0});
        CHECK_THROWS_AS(scale_normalize(tilted), ValidationError);
    }
}

TEST_CASE("align produces the canonical pose") {
    const AlignedLandmarks canonical = align(template_face());

    CHECK(canonical.points[kNoseTip].x == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(canonical.points[kNoseTip].y == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(std::abs(canonical.points[kNoseBridge].x - canonical.points[kNoseTip].x) <= 1e-9);
    CHECK(canonical.points[kNoseBridge].y < canonical.points[kNoseTip].y);
    const double nose = std::abs(canonical.points[kNoseBridge].y - canonical.points[kNoseTip].y);
    CHECK(std::abs(nose - 50.0) <= 1e-9);
    CHECK(std::abs(std::abs(canonical.points[kLeftEyeInner].x -
                            canonical.points[kLeftEyeOuter].x) -
                   30.0) <= 1e-9);
    CHECK(std::abs(roll_angle(as_landmarks(canonical))) <= 1e-9);
}

TEST_CASE("align is a fixed point on already-canonical input") {
    const AlignedLandmarks canonical = align(template_face());
    const AlignedLandmarks again = align(as_landmarks(canonical));
    CHECK(max_coord_delta(again.points, canonical.points) <= 1e-6);
}

TEST_CASE("align cancels a pure rotation about the nose tip") {
    const AlignedLandmarks base = align(template_face());
    const LandmarkSet rotated = transformed(template_face(), 0.3, 1.0, 0.0, 0.0, 200, 200);
    const AlignedLandmarks out = align(rotated);
    CHECK(max_coord_delta(out.points, base.points) <= 1e-6);
}

TEST_CASE("align cancels translation plus uniform scaling") {
    const AlignedLandmarks base = align(template_face());
    const LandmarkSet moved = transformed(template_face(), 0.0, 2.0, 17.0, -5.0, 400, 400);
    const AlignedLandmarks out = align(moved);
    CHECK(max_coord_delta(out.points, base.points) <= 1e-6);
}

TEST_CASE("align canonicalizes random rigid transforms of random faces") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> angle(-pi / 3, pi / 3);
    std::uniform_real_distribution<double> scale(0.5, 2.0);
    std::uniform_real_distribution<double> shift(-40.0, 40.0);
    for (int iter = 0; iter < 30; ++iter) {
        const LandmarkSet face = testutil::jittered_face(rng);
        const AlignedLandmarks base = align(face);
        const LandmarkSet moved =
            transformed(face, angle(rng), scale(rng), shift(rng) + 60.0, shift(rng) + 60.0, 400, 400);
        const AlignedLandmarks out = align(moved);
        CHECK(max_coord_delta(out.points, base.points) <= 1e-6);
    }
}

TEST_CASE("align is bitwise deterministic") {
    const LandmarkSet face = transformed(template_face(), 0.2, 1.3, 9.0, -2.0, 300, 250);
    const AlignedLandmarks a = align(face);
    const AlignedLandmarks b = align(face);
    CHECK(max_coord_delta(a.points, b.points) == 0.0);
    CHECK(a.roll_applied == b.roll_applied);
    CHECK(a.scale_x == b.scale_x);
    CHECK(a.scale_y == b.scale_y);
}
