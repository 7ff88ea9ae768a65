#pragma once

#include <string>

#include "emofuse/emotion.hpp"

namespace emofuse {

enum class FuseMethod { sum_softmax, plain_sum, min_entropy };

const std::string& to_string(FuseMethod m);
FuseMethod fuse_method_from_string(const std::string& name);

struct FusedPrediction {
    ProbabilityVector q{};
    Emotion choice = Emotion::neutral;
    FuseMethod method = FuseMethod::sum_softmax;
};

// Lowest canonical index among the maximizers of q.
Emotion forced_choice(const ProbabilityVector& q);

// Shannon entropy in nats, with 0*ln(0) = 0. Ranges over [0, ln 8].
double entropy(const ProbabilityVector& p);

// q_i = exp(pA_i + pB_i) / sum_j exp(pA_j + pB_j).
FusedPrediction fuse_sum_softmax(const ProbabilityVector& pA, const ProbabilityVector& pB);

// q_i = (pA_i + pB_i) / 2. Shares its argmax with fuse_sum_softmax.
FusedPrediction fuse_plain_sum(const ProbabilityVector& pA, const ProbabilityVector& pB);

// q = whichever input has strictly lower entropy; pA on an exact tie.
FusedPrediction fuse_min_entropy(const ProbabilityVector& pA, const ProbabilityVector& pB);

FusedPrediction fuse(FuseMethod method, const ProbabilityVector& pA, const ProbabilityVector& pB);

}  // namespace emofuse
