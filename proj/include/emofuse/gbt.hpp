#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "emofuse/emotion.hpp"
#include "emofuse/features.hpp"

namespace emofuse {

// Row-major dense feature matrix.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

struct TrainConfig {
    int rounds = 200;
    int max_depth = 6;
    double learning_rate = 0.1;
    double lambda = 1.0;           // L2 leaf regularizer
    double min_child_weight = 1.0; // minimum hessian sum per child
    std::uint64_t seed = 42;
};

void validate(const TrainConfig& cfg);

// Internal nodes carry feature/threshold/children/gain; leaves carry weight.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double gain = 0.0;
    double weight = 0.0;

    bool is_leaf() const { return left < 0; }
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // node 0 is the root

    double predict(std::span<const double> fv) const;
    int depth() const;
};

// Per-class additive tree ensembles plus everything needed to reproduce the
// featurization that trained them.
struct GbtModel {
    std::vector<std::array<RegressionTree, kEmotionCount>> rounds;
    double base_score = 0.0;
    std::size_t num_features = 0;
    TrainConfig config;
    FeatureStats stats;
    AlignTargets align_targets;
    std::string angle_table_hash;

    double learning_rate() const { return config.learning_rate; }
    std::size_t n_features() const { return num_features; }
};

// Numerically shifted softmax; output sums to 1.
ProbabilityVector softmax(const std::array<double, kEmotionCount>& scores);

struct GradHess {
    std::array<double, kEmotionCount> grad;
    std::array<double, kEmotionCount> hess;
};

// First and second derivatives of -log p_y with respect to the scores:
// g_i = p_i - [i == y], h_i = p_i (1 - p_i).
GradHess grad_hess(const ProbabilityVector& p, Emotion y);

// Fits one regression tree by exact greedy split search. Split gain is
// (G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda)) / 2, leaf
// weight -G/(H+lambda). Candidates are midpoints between consecutive
// distinct sorted feature values; ties break on lowest feature index, then
// lowest threshold.
RegressionTree fit_tree(const FeatureMatrix& X, std::span<const double> grad,
                        std::span<const double> hess, const TrainConfig& cfg);

// Newton boosting with a softmax objective: one tree per class per round.
// Deterministic for a fixed config and input order. If `nll_trace` is given
// it receives the mean training negative log-likelihood before any round and
// after each round.
GbtModel train(const FeatureMatrix& X, const std::vector<Emotion>& labels, const TrainConfig& cfg,
               std::vector<double>* nll_trace = nullptr);

ProbabilityVector predict_proba(const GbtModel& model, std::span<const double> fv);

// Gain accumulated per feature across the whole ensemble; a feature is
// important when its total gain strictly exceeds the mean over all features.
struct ImportanceReport {
    std::vector<double> gain;
    double mean_gain = 0.0;
    std::vector<int> important;  // ascending feature indices
    int n_important_distances = 0;
    int n_important_angles = 0;
};

ImportanceReport feature_importance(const GbtModel& model);

}  // namespace emofuse
