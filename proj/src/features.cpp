#include "emofuse/features.hpp"

#include <array>
#include <cmath>
#include <set>

#include "emofuse/errors.hpp"

namespace emofuse {

const std::string& to_string(FaceRegion r) {
    static const std::array<std::string, 5> names = {"outline", "brow", "eye", "mouth", "nose"};
    return names[static_cast<int>(r)];
}

FaceRegion face_region_from_string(const std::string& name) {
    for (int i = 0; i < 5; ++i) {
        auto r = static_cast<FaceRegion>(i);
        if (to_string(r) == name) return r;
    }
    throw ValidationError("unknown face region: " + name);
}

namespace {

std::vector<AngleSpec> build_default_angle_table() {
    std::vector<AngleSpec> table;
    table.reserve(kAngleCount);
    auto add = [&table](FaceRegion region, int a, int vertex, int b) {
        table.push_back({to_string(region) + "_" + std::to_string(vertex), a, vertex, b, region});
    };
    // Jaw outline: angle at each chosen vertex between its chain neighbours.
    for (int v : {1, 3, 5, 7, 8, 9, 11, 13, 15}) add(FaceRegion::outline, v - 1, v, v + 1);
    // Brows: interior vertices of the left (17..21) and right (22..26) chains.
    for (int v : {18, 19, 20, 23, 24, 25}) add(FaceRegion::brow, v - 1, v, v + 1);
    // Eyes: upper/lower lid vertices with their ring neighbours (rings 36..41 and 42..47).
    for (int v : {37, 38, 40}) add(FaceRegion::eye, v - 1, v, v + 1);
    for (int v : {43, 44, 46}) add(FaceRegion::eye, v - 1, v, v + 1);
    // Mouth: outer-lip vertices on the 12-point ring 48..59.
    for (int v : {48, 50, 51, 52, 54, 56, 58}) {
        const int prev = 48 + (v - 48 + 11) % 12;
        const int next = 48 + (v - 48 + 1) % 12;
        add(FaceRegion::mouth, prev, v, next);
    }
    // Nose: the angle under the tip, opening towards the nostril corners.
    add(FaceRegion::nose, 31, 33, 35);
    return table;
}

}  // namespace

const std::vector<AngleSpec>& default_angle_table() {
    static const std::vector<AngleSpec> table = build_default_angle_table();
    return table;
}

void validate_angle_table(const std::vector<AngleSpec>& table) {
    if (table.size() != kAngleCount) {
        throw ValidationError("angle table must have exactly 29 rows, got " +
                              std::to_string(table.size()));
    }
    std::array<int, 5> region_counts{};
    std::set<std::string> names;
    for (const AngleSpec& s : table) {
        for (int idx : {s.a, s.vertex, s.b}) {
            if (idx < 0 || idx >= kLandmarkCount) {
                throw ValidationError("angle '" + s.name + "' references landmark " +
                                      std::to_string(idx) + " outside 0..67");
            }
        }
        if (s.a == s.vertex || s.b == s.vertex || s.a == s.b) {
            throw ValidationError("angle '" + s.name + "' indices must be distinct");
        }
        if (!names.insert(s.name).second) {
            throw ValidationError("duplicate angle name '" + s.name + "'");
        }
        region_counts[static_cast<int>(s.region)]++;
    }
    const std::array<int, 5> expected = {9, 6, 6, 7, 1};
    for (int r = 0; r < 5; ++r) {
        if (region_counts[r] != expected[r]) {
            throw ValidationError("angle table region counts must be 9/6/6/7/1 " +
                                  std::string("(outline/brow/eye/mouth/nose)"));
        }
    }
}

std::vector<double> pairwise_distances(const AlignedLandmarks& al) {
    std::vector<double> out(kDistanceCount);
    for (int i = 0; i < kLandmarkCount; ++i) {
        for (int j = i + 1; j < kLandmarkCount; ++j) {
            const double dx = al.points[j].x - al.points[i].x;
            const double dy = al.points[j].y - al.points[i].y;
            out[pair_index(i, j)] = std::hypot(dx, dy);
        }
    }
    return out;
}

std::vector<double> facial_angles(const AlignedLandmarks& al, const std::vector<AngleSpec>& table) {
    std::vector<double> out;
    out.reserve(table.size());
    for (const AngleSpec& s : table) {
        const Point2 v = al.points[s.vertex];
        const double ux = al.points[s.a].x - v.x;
        const double uy = al.points[s.a].y - v.y;
        const double wx = al.points[s.b].x - v.x;
        const double wy = al.points[s.b].y - v.y;
        if ((ux == 0.0 && uy == 0.0) || (wx == 0.0 && wy == 0.0)) {
            throw GeometryError("angle '" + s.name + "' has a zero-length ray");
        }
        const double cross = ux * wy - uy * wx;
        const double dot = ux * wx + uy * wy;
        out.push_back(std::atan2(std::abs(cross), dot));
    }
    return out;
}

std::vector<double> featurize(const AlignedLandmarks& al, const std::vector<AngleSpec>& table) {
    std::vector<double> out = pairwise_distances(al);
    std::vector<double> angles = facial_angles(al, table);
    out.insert(out.end(), angles.begin(), angles.end());
    return out;
}

FeatureStats fit_stats(const std::vector<std::vector<double>>& features) {
    if (features.empty()) {
        throw ValidationError("cannot fit statistics on an empty feature collection");
    }
    const std::size_t dim = features.front().size();
    for (const auto& fv : features) {
        if (fv.size() != dim) {
            throw ValidationError("feature vectors have inconsistent lengths");
        }
    }
    const double n = static_cast<double>(features.size());
    FeatureStats stats;
    stats.n_fit = static_cast<std::int64_t>(features.size());
    stats.mean.assign(dim, 0.0);
    stats.stddev.assign(dim, 0.0);
    // Fixed row-major accumulation order keeps results bit-stable.
    for (const auto& fv : features) {
        for (std::size_t k = 0; k < dim; ++k) stats.mean[k] += fv[k];
    }
    for (std::size_t k = 0; k < dim; ++k) stats.mean[k] /= n;
    for (const auto& fv : features) {
        for (std::size_t k = 0; k < dim; ++k) {
            const double d = fv[k] - stats.mean[k];
            stats.stddev[k] += d * d;
        }
    }
    for (std::size_t k = 0; k < dim; ++k) stats.stddev[k] = std::sqrt(stats.stddev[k] / n);
    return stats;
}

std::vector<double> standardize(const std::vector<double>& fv, const FeatureStats& stats) {
    if (fv.size() != stats.mean.size()) {
        throw ValidationError("feature vector length does not match fitted statistics");
    }
    std::vector<double> out(fv.size());
    for (std::size_t k = 0; k < fv.size(); ++k) {
        out[k] = stats.is_constant(k) ? 0.0 : (fv[k] - stats.mean[k]) / stats.stddev[k];
    }
    return out;
}

}  // namespace emofuse
