#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emofuse/emotion.hpp"
#include "emofuse/io.hpp"

namespace emofuse {

// One dataset entry: a labelled face whose landmarks live under
// `landmark_ref` in the landmark file (the id doubles as the key).
struct ManifestRecord {
    std::string id;
    Emotion label = Emotion::neutral;
    std::string landmark_ref;

    bool operator==(const ManifestRecord&) const = default;
};

using Manifest = std::vector<ManifestRecord>;

Manifest manifest_from_labels(const std::vector<LabelRecord>& labels);
std::vector<LabelRecord> manifest_to_labels(const Manifest& manifest);

// Uniform per-class subsample down to the smallest class count, without
// replacement, deterministic in `seed`. Output is sorted by id.
Manifest balanced_subset(const Manifest& manifest, std::uint64_t seed);

// Drops records whose full 136-coordinate tuple is bit-identical to an
// earlier record in id order; the first occurrence stays.
Manifest dedup(const Manifest& manifest, const std::vector<LandmarkRecord>& landmarks);

struct SplitResult {
    Manifest train;
    Manifest test;
};

// Stratified split: per class, a seeded shuffle sends the first
// ceil(ratio * n_k) records to train. Outputs are sorted by id.
SplitResult split_train_test(const Manifest& manifest, double ratio, std::uint64_t seed);

}  // namespace emofuse
