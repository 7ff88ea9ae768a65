#include "emofuse/manifest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>

#include "emofuse/errors.hpp"
#include "emofuse/rng.hpp"

namespace emofuse {

namespace {

void sort_by_id(Manifest& m) {
    std::sort(m.begin(), m.end(),
              [](const ManifestRecord& a, const ManifestRecord& b) { return a.id < b.id; });
}

// Records of each class, sorted by id; classes in canonical order.
std::array<Manifest, kEmotionCount> by_class(const Manifest& manifest) {
    std::array<Manifest, kEmotionCount> classes;
    for (const ManifestRecord& rec : manifest) classes[static_cast<int>(rec.label)].push_back(rec);
    for (Manifest& c : classes) sort_by_id(c);
    return classes;
}

}  // namespace

Manifest manifest_from_labels(const std::vector<LabelRecord>& labels) {
    Manifest out;
    out.reserve(labels.size());
    for (const LabelRecord& rec : labels) out.push_back({rec.id, rec.label, rec.id});
    return out;
}

std::vector<LabelRecord> manifest_to_labels(const Manifest& manifest) {
    std::vector<LabelRecord> out;
    out.reserve(manifest.size());
    for (const ManifestRecord& rec : manifest) out.push_back({rec.id, rec.label});
    return out;
}

Manifest balanced_subset(const Manifest& manifest, std::uint64_t seed) {
    auto classes = by_class(manifest);
    std::size_t min_count = std::numeric_limits<std::size_t>::max();
    for (int k = 0; k < kEmotionCount; ++k) {
        if (classes[k].empty()) {
            throw ValidationError("class '" + emotion_names()[k] + "' has no records");
        }
        min_count = std::min(min_count, classes[k].size());
    }
    Rng rng(seed);
    Manifest out;
    out.reserve(min_count * kEmotionCount);
    for (int k = 0; k < kEmotionCount; ++k) {
        rng.shuffle(classes[k]);
        out.insert(out.end(), classes[k].begin(), classes[k].begin() + min_count);
    }
    sort_by_id(out);
    return out;
}

Manifest dedup(const Manifest& manifest, const std::vector<LandmarkRecord>& landmarks) {
    std::map<std::string, const LandmarkSet*> by_id;
    for (const LandmarkRecord& rec : landmarks) by_id[rec.id] = &rec.landmarks;

    Manifest ordered = manifest;
    sort_by_id(ordered);

    // Bitwise keys over the raw coordinate tuple: exact duplicates only.
    auto key_of = [](const LandmarkSet& lm) {
        std::string key(sizeof(double) * 2 * kLandmarkCount, '\0');
        std::memcpy(key.data(), lm.points.data(), key.size());
        return key;
    };

    std::map<std::string, bool> seen;
    Manifest out;
    for (const ManifestRecord& rec : ordered) {
        auto it = by_id.find(rec.landmark_ref.empty() ? rec.id : rec.landmark_ref);
        if (it == by_id.end()) {
            throw ValidationError("no landmarks loaded for id '" + rec.id + "'");
        }
        if (!seen.emplace(key_of(*it->second), true).second) continue;
        out.push_back(rec);
    }
    return out;
}

SplitResult split_train_test(const Manifest& manifest, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw ValidationError("split ratio must be in (0, 1)");
    }
    auto classes = by_class(manifest);
    Rng rng(seed);
    SplitResult result;
    for (int k = 0; k < kEmotionCount; ++k) {
        Manifest& members = classes[k];
        if (members.empty()) continue;
        rng.shuffle(members);
        const auto n_train = static_cast<std::size_t>(
            std::ceil(ratio * static_cast<double>(members.size())));
        result.train.insert(result.train.end(), members.begin(), members.begin() + n_train);
        result.test.insert(result.test.end(), members.begin() + n_train, members.end());
    }
    sort_by_id(result.train);
    sort_by_id(result.test);
    return result;
}

}  // namespace emofuse
