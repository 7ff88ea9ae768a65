#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emofuse/alignment.hpp"

namespace emofuse {

inline constexpr int kDistanceCount = 2278;  // C(68,2)
inline constexpr int kAngleCount = 29;
inline constexpr int kFeatureCount = kDistanceCount + kAngleCount;  // 2307

enum class FaceRegion { outline, brow, eye, mouth, nose };

const std::string& to_string(FaceRegion r);
FaceRegion face_region_from_string(const std::string& name);

// One interior angle: at `vertex`, between the rays vertex->a and vertex->b.
struct AngleSpec {
    std::string name;
    int a = 0;
    int vertex = 0;
    int b = 0;
    FaceRegion region = FaceRegion::outline;
};

// The 29-angle table shipped with the project (9 outline, 6 brow, 6 eye,
// 7 mouth, 1 nose). See FORMATS.md for the row-level definition.
const std::vector<AngleSpec>& default_angle_table();

// Throws ValidationError unless the table has 29 rows with the canonical
// region counts, distinct in-range indices, and unique names.
void validate_angle_table(const std::vector<AngleSpec>& table);

// Flat position of pair (i,j), i<j, in the lexicographic all-pairs order.
constexpr int pair_index(int i, int j) {
    return i * (2 * kLandmarkCount - 1 - i) / 2 + (j - i - 1);
}

// All C(68,2) Euclidean distances, in pair_index order.
std::vector<double> pairwise_distances(const AlignedLandmarks& al);

// One angle in [0, pi] per table row, in table order.
std::vector<double> facial_angles(const AlignedLandmarks& al, const std::vector<AngleSpec>& table);

// Distances followed by angles: the raw 2307-dimensional feature vector.
std::vector<double> featurize(const AlignedLandmarks& al, const std::vector<AngleSpec>& table);

// Per-coordinate mean / population standard deviation over a training set.
struct FeatureStats {
    std::vector<double> mean;
    std::vector<double> stddev;
    std::int64_t n_fit = 0;

    // Coordinates with stddev below this are treated as constant and map to 0.
    static constexpr double kConstantEps = 1e-12;
    bool is_constant(std::size_t k) const { return stddev[k] < kConstantEps; }
};

FeatureStats fit_stats(const std::vector<std::vector<double>>& features);

// z-scores `fv` against `stats`; constant coordinates map to 0.
std::vector<double> standardize(const std::vector<double>& fv, const FeatureStats& stats);

}  // namespace emofuse
