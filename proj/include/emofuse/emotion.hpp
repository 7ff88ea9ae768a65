#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace emofuse {

inline constexpr int kEmotionCount = 8;

// Canonical category order; all vectors and matrices are indexed by it.
enum class Emotion : std::uint8_t {
    neutral = 0,
    happy = 1,
    sad = 2,
    surprise = 3,
    fear = 4,
    disgust = 5,
    anger = 6,
    contempt = 7,
};

const std::array<std::string, kEmotionCount>& emotion_names();

const std::string& to_string(Emotion e);
std::optional<Emotion> emotion_from_string(std::string_view name);

// Distribution over the 8 canonical emotions; entries in [0,1], summing to 1.
using ProbabilityVector = std::array<double, kEmotionCount>;

bool is_valid_probability_vector(const ProbabilityVector& p, double sum_tol = 1e-9);

inline ProbabilityVector uniform_probability() {
    ProbabilityVector p;
    p.fill(1.0 / kEmotionCount);
    return p;
}

}  // namespace emofuse
