#include "emofuse/fusion.hpp"

#include <array>
#include <cmath>

#include "emofuse/errors.hpp"

namespace emofuse {

const std::string& to_string(FuseMethod m) {
    static const std::array<std::string, 3> names = {"sum-softmax", "plain-sum", "min-entropy"};
    return names[static_cast<int>(m)];
}

FuseMethod fuse_method_from_string(const std::string& name) {
    for (int i = 0; i < 3; ++i) {
        auto m = static_cast<FuseMethod>(i);
        if (to_string(m) == name) return m;
    }
    throw ValidationError("unknown fusion method: " + name);
}

Emotion forced_choice(const ProbabilityVector& q) {
    int best = 0;
    for (int i = 1; i < kEmotionCount; ++i) {
        if (q[i] > q[best]) best = i;
    }
    return static_cast<Emotion>(best);
}

double entropy(const ProbabilityVector& p) {
    double h = 0.0;
    for (double v : p) {
        if (v > 0.0) h -= v * std::log(v);
    }
    return h < 0.0 ? 0.0 : h;
}

FusedPrediction fuse_sum_softmax(const ProbabilityVector& pA, const ProbabilityVector& pB) {
    FusedPrediction out;
    out.method = FuseMethod::sum_softmax;
    double max_s = pA[0] + pB[0];
    for (int i = 1; i < kEmotionCount; ++i) max_s = std::max(max_s, pA[i] + pB[i]);
    double sum = 0.0;
    for (int i = 0; i < kEmotionCount; ++i) {
        out.q[i] = std::exp(pA[i] + pB[i] - max_s);
        sum += out.q[i];
    }
    for (double& v : out.q) v /= sum;
    out.choice = forced_choice(out.q);
    return out;
}

FusedPrediction fuse_plain_sum(const ProbabilityVector& pA, const ProbabilityVector& pB) {
    FusedPrediction out;
    out.method = FuseMethod::plain_sum;
    for (int i = 0; i < kEmotionCount; ++i) out.q[i] = (pA[i] + pB[i]) / 2.0;
    out.choice = forced_choice(out.q);
    return out;
}

FusedPrediction fuse_min_entropy(const ProbabilityVector& pA, const ProbabilityVector& pB) {
    FusedPrediction out;
    out.method = FuseMethod::min_entropy;
    out.q = entropy(pB) < entropy(pA) ? pB : pA;
    out.choice = forced_choice(out.q);
    return out;
}

FusedPrediction fuse(FuseMethod method, const ProbabilityVector& pA, const ProbabilityVector& pB) {
    switch (method) {
        case FuseMethod::sum_softmax: return fuse_sum_softmax(pA, pB);
        case FuseMethod::plain_sum: return fuse_plain_sum(pA, pB);
        case FuseMethod::min_entropy: return fuse_min_entropy(pA, pB);
    }
    throw ValidationError("unknown fusion method");
}

}  // namespace emofuse
