#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "emofuse/emotion.hpp"

namespace emofuse {

// 8x8 contingency table; rows index the first label sequence, columns the
// second (true/predicted for a classic confusion matrix).
struct ConfusionMatrix {
    std::array<std::array<std::int64_t, kEmotionCount>, kEmotionCount> counts{};
    std::array<std::array<double, kEmotionCount>, kEmotionCount> row_normalized{};
    std::array<bool, kEmotionCount> empty_row{};  // all-zero rows are flagged, not normalized

    std::int64_t total() const;
    std::int64_t trace() const;
};

ConfusionMatrix confusion_matrix(const std::vector<Emotion>& preds,
                                 const std::vector<Emotion>& truth);

// Rows = method A's prediction, columns = method B's.
ConfusionMatrix cross_method_matrix(const std::vector<Emotion>& predsA,
                                    const std::vector<Emotion>& predsB);

double accuracy(const std::vector<Emotion>& preds, const std::vector<Emotion>& truth);

struct MacroF1 {
    double macro = 0.0;
    std::array<double, kEmotionCount> per_class{};
};

MacroF1 macro_f1(const std::vector<Emotion>& preds, const std::vector<Emotion>& truth);

// Chance-corrected agreement between two label sequences over the 8
// canonical categories.
double cohens_kappa(const std::vector<Emotion>& predsA, const std::vector<Emotion>& predsB);

struct AgreementReport {
    std::int64_t n_total = 0;
    std::int64_t n_agree = 0;
    std::int64_t n_disagree = 0;
    std::int64_t n_both_correct_when_agree = 0;
    std::int64_t n_higher_conf_correct = 0;
    std::int64_t n_lower_conf_correct = 0;
    std::int64_t n_neither_correct = 0;
    std::int64_t n_conf_ties = 0;  // disagreements where both confidences were equal
    double kappa = 0.0;
};

// Agreement structure of two classifiers against the truth. `confA`/`confB`
// are each method's maximum class probability. On a disagreement the method
// with strictly greater confidence is "higher"; an exact tie counts method A
// as higher and increments n_conf_ties.
AgreementReport agreement_breakdown(const std::vector<Emotion>& predsA,
                                    const std::vector<Emotion>& predsB,
                                    const std::vector<double>& confA,
                                    const std::vector<double>& confB,
                                    const std::vector<Emotion>& truth);

struct EntropyBin {
    double lo = 0.0;
    double hi = 0.0;
    std::int64_t n = 0;
    std::optional<double> accuracy;  // absent for empty bins
};

struct EntropyAccuracyCurve {
    double bin_width = 0.0;
    std::vector<EntropyBin> bins;  // contiguous partition of [0, ln 8]
};

EntropyAccuracyCurve entropy_accuracy_curve(const std::vector<Emotion>& preds,
                                            const std::vector<Emotion>& truth,
                                            const std::vector<double>& entropies,
                                            double bin_width);

struct EvaluationReport {
    ConfusionMatrix confusion;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::array<double, kEmotionCount> per_class_f1{};
    EntropyAccuracyCurve curve;
};

// Convenience bundle of the per-classifier evaluation artifacts.
EvaluationReport evaluate(const std::vector<Emotion>& preds, const std::vector<Emotion>& truth,
                          const std::vector<double>& entropies, double bin_width);

}  // namespace emofuse
