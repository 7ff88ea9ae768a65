#include "emofuse/alignment.hpp"

#include <cmath>
#include <numbers>

#include "emofuse/errors.hpp"

namespace emofuse {

namespace {

void require_finite(const LandmarkSet& lm) {
    for (const Point2& p : lm.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw ValidationError("landmark set contains non-finite coordinates");
        }
    }
}

}  // namespace

LandmarkSet resize_to_canvas(const LandmarkSet& lm) {
    if (lm.src_width <= 0 || lm.src_height <= 0) {
        throw ValidationError("source dimensions must be positive");
    }
    require_finite(lm);
    const double sx = kCanvasSize / lm.src_width;
    const double sy = kCanvasSize / lm.src_height;
    LandmarkSet out;
    out.src_width = static_cast<int>(kCanvasSize);
    out.src_height = static_cast<int>(kCanvasSize);
    for (int i = 0; i < kLandmarkCount; ++i) {
        out.points[i] = {lm.points[i].x * sx, lm.points[i].y * sy};
    }
    return out;
}

LandmarkSet center_on_nose(const LandmarkSet& lm) {
    const double dx = kCanvasCenter - lm.points[kNoseTip].x;
    const double dy = kCanvasCenter - lm.points[kNoseTip].y;
    LandmarkSet out = lm;
    for (Point2& p : out.points) {
        p.x += dx;
        p.y += dy;
    }
    out.points[kNoseTip] = {kCanvasCenter, kCanvasCenter};
    return out;
}

double roll_angle(const LandmarkSet& lm) {
    const Point2 tip = lm.points[kNoseTip];
    const Point2 bridge = lm.points[kNoseBridge];
    const double dx = bridge.x - tip.x;
    const double dy = bridge.y - tip.y;
    if (dx == 0.0 && dy == 0.0) {
        throw GeometryError("nose bridge and nose tip coincide");
    }
    // y grows downward, so the upward vertical is (0,-1).
    double theta = std::atan2(dx, -dy);
    if (theta <= -std::numbers::pi) theta = std::numbers::pi;
    return theta;
}

LandmarkSet rotate(const LandmarkSet& lm, double theta, Point2 pivot) {
    if (!std::isfinite(theta)) {
        throw ValidationError("rotation angle must be finite");
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    LandmarkSet out = lm;
    for (Point2& p : out.points) {
        const double ox = p.x - pivot.x;
        const double oy = p.y - pivot.y;
        p.x = pivot.x + c * ox - s * oy;
        p.y = pivot.y + s * ox + c * oy;
    }
    return out;
}

AlignedLandmarks scale_normalize(const LandmarkSet& lm, const AlignTargets& targets) {
    if (targets.nose_length <= 0.0 || targets.eye_width <= 0.0) {
        throw ValidationError("alignment targets must be positive");
    }
    require_finite(lm);
    const Point2 tip = lm.points[kNoseTip];
    if (std::abs(tip.x - kCanvasCenter) > 1e-6 || std::abs(tip.y - kCanvasCenter) > 1e-6) {
        throw ValidationError("face must be centered on the nose tip before scaling");
    }
    if (std::abs(roll_angle(lm)) > 1e-6) {
        throw ValidationError("face must be upright before scaling");
    }
    // Absorb the sub-tolerance centering residual so the tip lands exactly on
    // (100,100); a rigid translation, bounded by the precondition.
    const double tx = kCanvasCenter - tip.x;
    const double ty = kCanvasCenter - tip.y;
    const double nose_len = std::abs(lm.points[kNoseBridge].y + ty - kCanvasCenter);
    const double eye_width = std::abs(lm.points[kLeftEyeInner].x - lm.points[kLeftEyeOuter].x);
    if (nose_len <= 0.0) throw GeometryError("zero nose length");
    if (eye_width <= 0.0) throw GeometryError("zero eye width");

    AlignedLandmarks out;
    out.scale_y = targets.nose_length / nose_len;
    out.scale_x = targets.eye_width / eye_width;
    for (int i = 0; i < kLandmarkCount; ++i) {
        out.points[i].x = kCanvasCenter + (lm.points[i].x + tx - kCanvasCenter) * out.scale_x;
        out.points[i].y = kCanvasCenter + (lm.points[i].y + ty - kCanvasCenter) * out.scale_y;
    }
    // The roll precondition bounds the bridge's horizontal residual; snap it
    // onto the vertical axis so the canonical-pose invariants hold exactly.
    out.points[kNoseBridge].x = kCanvasCenter;
    return out;
}

AlignedLandmarks align(const LandmarkSet& lm, const AlignTargets& targets) {
    LandmarkSet centered = center_on_nose(resize_to_canvas(lm));
    const double roll = roll_angle(centered);
    LandmarkSet upright = rotate(centered, -roll, {kCanvasCenter, kCanvasCenter});
    AlignedLandmarks out = scale_normalize(upright, targets);
    out.roll_applied = -roll;
    return out;
}

}  // namespace emofuse
