#pragma once

#include <array>

namespace emofuse {

struct Point2 {
    double x = 0.0;  // rightward positive, canvas units
    double y = 0.0;  // downward positive
};

inline constexpr int kLandmarkCount = 68;

// Landmark indices of the 68-point scheme used throughout.
inline constexpr int kNoseBridge = 27;
inline constexpr int kNoseTip = 33;
inline constexpr int kLeftEyeOuter = 36;
inline constexpr int kLeftEyeInner = 39;

inline constexpr double kCanvasSize = 200.0;
inline constexpr double kCanvasCenter = 100.0;

// 68 ordered points plus the dimensions of the image they were measured on.
struct LandmarkSet {
    std::array<Point2, kLandmarkCount> points{};
    int src_width = 0;
    int src_height = 0;
};

// Target lengths the canonical pose is scaled to. Recorded in stats/model
// files so featurization is reproducible.
struct AlignTargets {
    double nose_length = 50.0;  // distance from nose tip to nose bridge after alignment
    double eye_width = 30.0;    // |x| span between the two corners of the left eye
};

// Landmarks in canonical pose on the 200x200 canvas: nose tip at (100,100),
// nose bridge vertically above it at nose_length, left-eye corner span eye_width.
struct AlignedLandmarks {
    std::array<Point2, kLandmarkCount> points{};
    double roll_applied = 0.0;  // rotation (radians) applied to remove roll
    double scale_x = 1.0;
    double scale_y = 1.0;
};

// Maps every point by (x*200/w, y*200/h); result dimensions become 200x200.
LandmarkSet resize_to_canvas(const LandmarkSet& lm);

// Translates all points so the nose tip lands exactly on (100,100).
LandmarkSet center_on_nose(const LandmarkSet& lm);

// In-plane head tilt: angle between the tip->bridge line and the upward
// vertical, in (-pi, pi]. Zero iff the bridge is directly above the tip.
double roll_angle(const LandmarkSet& lm);

// Rotates every point about `pivot` by `theta` (counterclockwise in the
// x-right / y-down frame).
LandmarkSet rotate(const LandmarkSet& lm, double theta, Point2 pivot);

// Anisotropic scale about (100,100): y from the nose-length target, x from
// the eye-width target. Requires a centered, upright face.
AlignedLandmarks scale_normalize(const LandmarkSet& lm, const AlignTargets& targets = {});

// Full canonicalization: resize, center, roll-correct, scale-normalize.
AlignedLandmarks align(const LandmarkSet& lm, const AlignTargets& targets = {});

}  // namespace emofuse
