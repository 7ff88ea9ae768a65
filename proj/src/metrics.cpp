#include "emofuse/metrics.hpp"

#include <cmath>
#include <string>

#include "emofuse/errors.hpp"

namespace emofuse {

namespace {

void require_equal_lengths(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw ValidationError(std::string(what) + ": length mismatch (" + std::to_string(a) +
                              " vs " + std::to_string(b) + ")");
    }
    if (a == 0) {
        throw ValidationError(std::string(what) + ": empty input");
    }
}

ConfusionMatrix tabulate(const std::vector<Emotion>& row_labels,
                         const std::vector<Emotion>& col_labels) {
    ConfusionMatrix m;
    for (std::size_t i = 0; i < row_labels.size(); ++i) {
        m.counts[static_cast<int>(row_labels[i])][static_cast<int>(col_labels[i])]++;
    }
    for (int r = 0; r < kEmotionCount; ++r) {
        std::int64_t row_total = 0;
        for (std::int64_t c : m.counts[r]) row_total += c;
        m.empty_row[r] = row_total == 0;
        for (int c = 0; c < kEmotionCount; ++c) {
            m.row_normalized[r][c] =
                row_total == 0 ? 0.0
                               : static_cast<double>(m.counts[r][c]) / static_cast<double>(row_total);
        }
    }
    return m;
}

}  // namespace

std::int64_t ConfusionMatrix::total() const {
    std::int64_t t = 0;
    for (const auto& row : counts) {
        for (std::int64_t c : row) t += c;
    }
    return t;
}

std::int64_t ConfusionMatrix::trace() const {
    std::int64_t t = 0;
    for (int i = 0; i < kEmotionCount; ++i) t += counts[i][i];
    return t;
}

ConfusionMatrix confusion_matrix(const std::vector<Emotion>& preds,
                                 const std::vector<Emotion>& truth) {
    require_equal_lengths(preds.size(), truth.size(), "confusion_matrix");
    return tabulate(truth, preds);
}

ConfusionMatrix cross_method_matrix(const std::vector<Emotion>& predsA,
                                    const std::vector<Emotion>& predsB) {
    require_equal_lengths(predsA.size(), predsB.size(), "cross_method_matrix");
    return tabulate(predsA, predsB);
}

double accuracy(const std::vector<Emotion>& preds, const std::vector<Emotion>& truth) {
    require_equal_lengths(preds.size(), truth.size(), "accuracy");
    std::int64_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] == truth[i]) correct++;
    }
    return static_cast<double>(correct) / static_cast<double>(preds.size());
}

MacroF1 macro_f1(const std::vector<Emotion>& preds, const std::vector<Emotion>& truth) {
    require_equal_lengths(preds.size(), truth.size(), "macro_f1");
    std::array<std::int64_t, kEmotionCount> tp{}, fp{}, fn{};
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int p = static_cast<int>(preds[i]);
        const int t = static_cast<int>(truth[i]);
        if (p == t) {
            tp[t]++;
        } else {
            fp[p]++;
            fn[t]++;
        }
    }
    MacroF1 out;
    for (int k = 0; k < kEmotionCount; ++k) {
        const double denom = static_cast<double>(2 * tp[k] + fp[k] + fn[k]);
        out.per_class[k] = denom > 0.0 ? 2.0 * static_cast<double>(tp[k]) / denom : 0.0;
        out.macro += out.per_class[k];
    }
    out.macro /= kEmotionCount;
    return out;
}

double cohens_kappa(const std::vector<Emotion>& predsA, const std::vector<Emotion>& predsB) {
    require_equal_lengths(predsA.size(), predsB.size(), "cohens_kappa");
    const double n = static_cast<double>(predsA.size());
    std::array<std::int64_t, kEmotionCount> marginalA{}, marginalB{};
    std::int64_t agree = 0;
    for (std::size_t i = 0; i < predsA.size(); ++i) {
        marginalA[static_cast<int>(predsA[i])]++;
        marginalB[static_cast<int>(predsB[i])]++;
        if (predsA[i] == predsB[i]) agree++;
    }
    const double p_o = static_cast<double>(agree) / n;
    double p_e = 0.0;
    for (int k = 0; k < kEmotionCount; ++k) {
        p_e += (static_cast<double>(marginalA[k]) / n) * (static_cast<double>(marginalB[k]) / n);
    }
    if (p_e >= 1.0) {
        // Both sequences are constant; agreement is either perfect or void.
        return p_o >= 1.0 ? 1.0 : 0.0;
    }
    return (p_o - p_e) / (1.0 - p_e);
}

AgreementReport agreement_breakdown(const std::vector<Emotion>& predsA,
                                    const std::vector<Emotion>& predsB,
                                    const std::vector<double>& confA,
                                    const std::vector<double>& confB,
                                    const std::vector<Emotion>& truth) {
    require_equal_lengths(predsA.size(), predsB.size(), "agreement_breakdown");
    require_equal_lengths(predsA.size(), confA.size(), "agreement_breakdown");
    require_equal_lengths(predsA.size(), confB.size(), "agreement_breakdown");
    require_equal_lengths(predsA.size(), truth.size(), "agreement_breakdown");

    AgreementReport report;
    report.n_total = static_cast<std::int64_t>(predsA.size());
    for (std::size_t i = 0; i < predsA.size(); ++i) {
        if (predsA[i] == predsB[i]) {
            report.n_agree++;
            if (predsA[i] == truth[i]) report.n_both_correct_when_agree++;
            continue;
        }
        report.n_disagree++;
        const bool a_is_higher = confA[i] >= confB[i];
        if (confA[i] == confB[i]) report.n_conf_ties++;
        const Emotion higher_pred = a_is_higher ? predsA[i] : predsB[i];
        const Emotion lower_pred = a_is_higher ? predsB[i] : predsA[i];
        if (higher_pred == truth[i]) {
            report.n_higher_conf_correct++;
        } else if (lower_pred == truth[i]) {
            report.n_lower_conf_correct++;
        } else {
            report.n_neither_correct++;
        }
    }
    report.kappa = cohens_kappa(predsA, predsB);
    return report;
}

EntropyAccuracyCurve entropy_accuracy_curve(const std::vector<Emotion>& preds,
                                            const std::vector<Emotion>& truth,
                                            const std::vector<double>& entropies,
                                            double bin_width) {
    require_equal_lengths(preds.size(), truth.size(), "entropy_accuracy_curve");
    require_equal_lengths(preds.size(), entropies.size(), "entropy_accuracy_curve");
    if (!(bin_width > 0.0)) throw ValidationError("bin_width must be positive");

    const double max_entropy = std::log(static_cast<double>(kEmotionCount));
    const int n_bins = std::max(1, static_cast<int>(std::ceil(max_entropy / bin_width)));

    EntropyAccuracyCurve curve;
    curve.bin_width = bin_width;
    curve.bins.resize(n_bins);
    std::vector<std::int64_t> correct(n_bins, 0);
    for (int k = 0; k < n_bins; ++k) {
        curve.bins[k].lo = k * bin_width;
        curve.bins[k].hi = std::min((k + 1) * bin_width, max_entropy);
    }
    for (std::size_t i = 0; i < preds.size(); ++i) {
        double h = entropies[i];
        if (!std::isfinite(h)) throw ValidationError("entropy values must be finite");
        h = std::min(std::max(h, 0.0), max_entropy);
        const int k = std::min(static_cast<int>(h / bin_width), n_bins - 1);
        curve.bins[k].n++;
        if (preds[i] == truth[i]) correct[k]++;
    }
    for (int k = 0; k < n_bins; ++k) {
        if (curve.bins[k].n > 0) {
            curve.bins[k].accuracy =
                static_cast<double>(correct[k]) / static_cast<double>(curve.bins[k].n);
        }
    }
    return curve;
}

EvaluationReport evaluate(const std::vector<Emotion>& preds, const std::vector<Emotion>& truth,
                          const std::vector<double>& entropies, double bin_width) {
    EvaluationReport report;
    report.confusion = confusion_matrix(preds, truth);
    report.accuracy = accuracy(preds, truth);
    const MacroF1 f1 = macro_f1(preds, truth);
    report.macro_f1 = f1.macro;
    report.per_class_f1 = f1.per_class;
    report.curve = entropy_accuracy_curve(preds, truth, entropies, bin_width);
    return report;
}

}  // namespace emofuse
