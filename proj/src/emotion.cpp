#include "emofuse/emotion.hpp"

#include <cmath>

namespace emofuse {

const std::array<std::string, kEmotionCount>& emotion_names() {
    static const std::array<std::string, kEmotionCount> names = {
        "neutral", "happy", "sad", "surprise", "fear", "disgust", "anger", "contempt"};
    return names;
}

const std::string& to_string(Emotion e) {
    return emotion_names()[static_cast<int>(e)];
}

std::optional<Emotion> emotion_from_string(std::string_view name) {
    const auto& names = emotion_names();
    for (int i = 0; i < kEmotionCount; ++i) {
        if (names[i] == name) return static_cast<Emotion>(i);
    }
    return std::nullopt;
}

bool is_valid_probability_vector(const ProbabilityVector& p, double sum_tol) {
    double sum = 0.0;
    for (double v : p) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) return false;
        sum += v;
    }
    return std::abs(sum - 1.0) <= sum_tol;
}

}  // namespace emofuse
