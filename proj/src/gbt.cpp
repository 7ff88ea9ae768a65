#include "emofuse/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "emofuse/errors.hpp"

namespace emofuse {

void validate(const TrainConfig& cfg) {
    if (cfg.rounds < 0) throw ValidationError("rounds must be non-negative");
    if (cfg.max_depth < 1) throw ValidationError("max_depth must be positive");
    if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0)) {
        throw ValidationError("learning_rate must be in (0, 1]");
    }
    if (cfg.lambda < 0.0) throw ValidationError("lambda must be non-negative");
    if (cfg.min_child_weight < 0.0) throw ValidationError("min_child_weight must be non-negative");
}

double RegressionTree::predict(std::span<const double> fv) const {
    const TreeNode* node = &nodes[0];
    while (!node->is_leaf()) {
        node = &nodes[fv[node->feature] < node->threshold ? node->left : node->right];
    }
    return node->weight;
}

int RegressionTree::depth() const {
    // Depth of a leaf-only tree is 0.
    std::vector<std::pair<int, int>> stack = {{0, 0}};
    int depth = 0;
    while (!stack.empty()) {
        auto [idx, d] = stack.back();
        stack.pop_back();
        depth = std::max(depth, d);
        const TreeNode& n = nodes[idx];
        if (!n.is_leaf()) {
            stack.push_back({n.left, d + 1});
            stack.push_back({n.right, d + 1});
        }
    }
    return depth;
}

ProbabilityVector softmax(const std::array<double, kEmotionCount>& scores) {
    double max_score = scores[0];
    for (double s : scores) max_score = std::max(max_score, s);
    ProbabilityVector p;
    double sum = 0.0;
    for (int i = 0; i < kEmotionCount; ++i) {
        p[i] = std::exp(scores[i] - max_score);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

GradHess grad_hess(const ProbabilityVector& p, Emotion y) {
    GradHess gh;
    for (int i = 0; i < kEmotionCount; ++i) {
        gh.grad[i] = p[i] - (i == static_cast<int>(y) ? 1.0 : 0.0);
        gh.hess[i] = p[i] * (1.0 - p[i]);
    }
    return gh;
}

namespace {

double leaf_weight(double g, double h, double lambda) {
    const double denom = h + lambda;
    return denom > 0.0 ? -g / denom : 0.0;
}

double score_term(double g, double h, double lambda) {
    const double denom = h + lambda;
    return denom > 0.0 ? g * g / denom : 0.0;
}

struct SplitChoice {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

// Exact greedy search over all (feature, midpoint) candidates for the rows
// in `rows`. Returns a choice with gain 0 when no admissible split improves.
SplitChoice best_split(const FeatureMatrix& X, std::span<const double> grad,
                       std::span<const double> hess, const std::vector<std::size_t>& rows,
                       double total_g, double total_h, const TrainConfig& cfg,
                       std::vector<std::pair<double, std::size_t>>& scratch) {
    SplitChoice best;
    const double parent_score = score_term(total_g, total_h, cfg.lambda);
    for (std::size_t f = 0; f < X.cols; ++f) {
        scratch.clear();
        for (std::size_t r : rows) scratch.push_back({X.at(r, f), r});
        std::sort(scratch.begin(), scratch.end());

        double g_left = 0.0, h_left = 0.0;
        for (std::size_t k = 0; k + 1 < scratch.size(); ++k) {
            g_left += grad[scratch[k].second];
            h_left += hess[scratch[k].second];
            const double lo = scratch[k].first;
            const double hi = scratch[k + 1].first;
            if (lo == hi) continue;
            const double threshold = lo + (hi - lo) / 2.0;
            if (!(threshold > lo)) continue;  // midpoint rounded onto lo
            const double g_right = total_g - g_left;
            const double h_right = total_h - h_left;
            if (h_left < cfg.min_child_weight || h_right < cfg.min_child_weight) continue;
            const double gain = 0.5 * (score_term(g_left, h_left, cfg.lambda) +
                                       score_term(g_right, h_right, cfg.lambda) - parent_score);
            if (gain > best.gain) {
                best = {gain, static_cast<int>(f), threshold};
            }
        }
    }
    return best;
}

int build_node(const FeatureMatrix& X, std::span<const double> grad, std::span<const double> hess,
               std::vector<std::size_t>&& rows, int depth, const TrainConfig& cfg,
               std::vector<TreeNode>& nodes, std::vector<std::pair<double, std::size_t>>& scratch) {
    double total_g = 0.0, total_h = 0.0;
    for (std::size_t r : rows) {
        total_g += grad[r];
        total_h += hess[r];
    }

    SplitChoice split;
    if (depth < cfg.max_depth && rows.size() > 1) {
        split = best_split(X, grad, hess, rows, total_g, total_h, cfg, scratch);
    }

    const int idx = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (split.feature < 0 || split.gain <= 0.0) {
        nodes[idx].weight = leaf_weight(total_g, total_h, cfg.lambda);
        return idx;
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
        (X.at(r, split.feature) < split.threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    nodes[idx].feature = split.feature;
    nodes[idx].threshold = split.threshold;
    nodes[idx].gain = split.gain;
    const int left = build_node(X, grad, hess, std::move(left_rows), depth + 1, cfg, nodes, scratch);
    nodes[idx].left = left;
    const int right = build_node(X, grad, hess, std::move(right_rows), depth + 1, cfg, nodes, scratch);
    nodes[idx].right = right;
    return idx;
}

double mean_nll(const std::vector<std::array<double, kEmotionCount>>& scores,
                const std::vector<Emotion>& labels) {
    double total = 0.0;
    for (std::size_t r = 0; r < scores.size(); ++r) {
        const ProbabilityVector p = softmax(scores[r]);
        total += -std::log(std::max(p[static_cast<int>(labels[r])],
                                    std::numeric_limits<double>::min()));
    }
    return total / static_cast<double>(scores.size());
}

}  // namespace

RegressionTree fit_tree(const FeatureMatrix& X, std::span<const double> grad,
                        std::span<const double> hess, const TrainConfig& cfg) {
    validate(cfg);
    if (X.rows == 0) throw ValidationError("cannot fit a tree on empty data");
    if (grad.size() != X.rows || hess.size() != X.rows) {
        throw ValidationError("gradient/hessian length must match the row count");
    }
    std::vector<std::size_t> rows(X.rows);
    for (std::size_t r = 0; r < X.rows; ++r) rows[r] = r;
    RegressionTree tree;
    std::vector<std::pair<double, std::size_t>> scratch;
    build_node(X, grad, hess, std::move(rows), 0, cfg, tree.nodes, scratch);
    return tree;
}

GbtModel train(const FeatureMatrix& X, const std::vector<Emotion>& labels, const TrainConfig& cfg,
               std::vector<double>* nll_trace) {
    validate(cfg);
    if (X.rows == 0) throw ValidationError("cannot train on empty data");
    if (labels.size() != X.rows) throw ValidationError("label count must match the row count");
    for (Emotion y : labels) {
        if (static_cast<int>(y) >= kEmotionCount) {
            throw ValidationError("label index outside 0..7");
        }
    }

    GbtModel model;
    model.config = cfg;
    model.num_features = X.cols;
    model.rounds.reserve(cfg.rounds);

    std::vector<std::array<double, kEmotionCount>> scores(X.rows);
    for (auto& s : scores) s.fill(model.base_score);

    if (nll_trace) {
        nll_trace->clear();
        nll_trace->push_back(mean_nll(scores, labels));
    }

    std::vector<double> grad(X.rows), hess(X.rows);
    for (int round = 0; round < cfg.rounds; ++round) {
        // Gradients for the whole round come from the round-start scores.
        std::vector<GradHess> gh(X.rows);
        for (std::size_t r = 0; r < X.rows; ++r) {
            gh[r] = grad_hess(softmax(scores[r]), labels[r]);
        }
        std::array<RegressionTree, kEmotionCount> round_trees;
        for (int k = 0; k < kEmotionCount; ++k) {
            for (std::size_t r = 0; r < X.rows; ++r) {
                grad[r] = gh[r].grad[k];
                hess[r] = gh[r].hess[k];
            }
            round_trees[k] = fit_tree(X, grad, hess, cfg);
            for (std::size_t r = 0; r < X.rows; ++r) {
                scores[r][k] += cfg.learning_rate * round_trees[k].predict(X.row(r));
            }
        }
        model.rounds.push_back(std::move(round_trees));
        if (nll_trace) nll_trace->push_back(mean_nll(scores, labels));
    }
    return model;
}

ProbabilityVector predict_proba(const GbtModel& model, std::span<const double> fv) {
    if (fv.size() != model.n_features()) {
        throw ValidationError("feature vector length " + std::to_string(fv.size()) +
                              " does not match the model's " + std::to_string(model.n_features()));
    }
    std::array<double, kEmotionCount> scores;
    scores.fill(model.base_score);
    for (const auto& round_trees : model.rounds) {
        for (int k = 0; k < kEmotionCount; ++k) {
            scores[k] += model.learning_rate() * round_trees[k].predict(fv);
        }
    }
    return softmax(scores);
}

ImportanceReport feature_importance(const GbtModel& model) {
    const std::size_t dim = model.n_features() > 0 ? model.n_features() : kFeatureCount;
    ImportanceReport report;
    report.gain.assign(dim, 0.0);
    for (const auto& round_trees : model.rounds) {
        for (const RegressionTree& tree : round_trees) {
            for (const TreeNode& node : tree.nodes) {
                if (!node.is_leaf()) report.gain[node.feature] += node.gain;
            }
        }
    }
    double total = 0.0;
    for (double g : report.gain) total += g;
    report.mean_gain = total / static_cast<double>(dim);
    for (std::size_t f = 0; f < dim; ++f) {
        if (report.gain[f] > report.mean_gain) {
            report.important.push_back(static_cast<int>(f));
            // The distance/angle split only applies to full-width models.
            if (dim == static_cast<std::size_t>(kFeatureCount) &&
                f >= static_cast<std::size_t>(kDistanceCount)) {
                report.n_important_angles++;
            } else {
                report.n_important_distances++;
            }
        }
    }
    return report;
}

}  // namespace emofuse
