#include "emofuse/cli.hpp"

#include <iostream>
#include <map>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "emofuse/errors.hpp"
#include "emofuse/io.hpp"
#include "emofuse/manifest.hpp"
#include "emofuse/metrics.hpp"
#include "json.hpp"

namespace emofuse {

using nlohmann::json;

void validate(const RunConfig& cfg) {
    if (!(cfg.split_ratio > 0.0 && cfg.split_ratio < 1.0)) {
        throw ValidationError("split_ratio must be in (0, 1)");
    }
    if (!(cfg.bin_width > 0.0)) throw ValidationError("bin_width must be positive");
    if (!(cfg.targets.nose_length > 0.0 && cfg.targets.eye_width > 0.0)) {
        throw ValidationError("alignment targets must be positive");
    }
    validate(cfg.train);
}

RunConfig load_run_config(const std::filesystem::path& path) {
    RunConfig cfg;
    try {
        const json j = json::parse(read_text_file(path));
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("split_ratio")) cfg.split_ratio = j.at("split_ratio").get<double>();
        if (j.contains("bin_width")) cfg.bin_width = j.at("bin_width").get<double>();
        if (j.contains("fusion_method")) {
            cfg.fusion_method = fuse_method_from_string(j.at("fusion_method").get<std::string>());
        }
        if (j.contains("nose_target")) cfg.targets.nose_length = j.at("nose_target").get<double>();
        if (j.contains("eye_target")) cfg.targets.eye_width = j.at("eye_target").get<double>();
        if (j.contains("angle_table")) cfg.angle_table_path = j.at("angle_table").get<std::string>();
        if (j.contains("train")) {
            const json& t = j.at("train");
            if (t.contains("rounds")) cfg.train.rounds = t.at("rounds").get<int>();
            if (t.contains("max_depth")) cfg.train.max_depth = t.at("max_depth").get<int>();
            if (t.contains("learning_rate")) {
                cfg.train.learning_rate = t.at("learning_rate").get<double>();
            }
            if (t.contains("lambda")) cfg.train.lambda = t.at("lambda").get<double>();
            if (t.contains("min_child_weight")) {
                cfg.train.min_child_weight = t.at("min_child_weight").get<double>();
            }
            if (t.contains("seed")) cfg.train.seed = t.at("seed").get<std::uint64_t>();
        }
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    validate(cfg);
    return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["split_ratio"] = cfg.split_ratio;
    j["bin_width"] = cfg.bin_width;
    j["fusion_method"] = to_string(cfg.fusion_method);
    j["nose_target"] = cfg.targets.nose_length;
    j["eye_target"] = cfg.targets.eye_width;
    j["angle_table"] = cfg.angle_table_path;
    j["train"] = {{"rounds", cfg.train.rounds},
                  {"max_depth", cfg.train.max_depth},
                  {"learning_rate", cfg.train.learning_rate},
                  {"lambda", cfg.train.lambda},
                  {"min_child_weight", cfg.train.min_child_weight},
                  {"seed", cfg.train.seed}};
    return j.dump();
}

namespace {

// All flag values plus which ones the user actually passed.
struct Args {
    std::string config;
    std::string landmarks, labels, probs_a, probs_b, model, stats, angle_table, features;
    std::string out, out_train, out_test, method;
    std::uint64_t seed = 0;
    double ratio = 0.0;
    double bin_width = 0.0;
    bool fit_stats = false;

    bool seed_set = false, ratio_set = false, bin_width_set = false, method_set = false;
    bool angle_table_set = false;
};

RunConfig effective_config(const Args& a) {
    RunConfig cfg;
    if (!a.config.empty()) cfg = load_run_config(a.config);
    if (a.seed_set) {
        cfg.seed = a.seed;
        cfg.train.seed = a.seed;
    }
    if (a.ratio_set) cfg.split_ratio = a.ratio;
    if (a.bin_width_set) cfg.bin_width = a.bin_width;
    if (a.method_set) cfg.fusion_method = fuse_method_from_string(a.method);
    if (a.angle_table_set) cfg.angle_table_path = a.angle_table;
    validate(cfg);
    return cfg;
}

std::vector<AngleSpec> resolve_angle_table(const RunConfig& cfg) {
    if (cfg.angle_table_path.empty()) return default_angle_table();
    return load_angle_table(cfg.angle_table_path);
}

Provenance make_provenance(const std::string& tool, const RunConfig& cfg,
                           const std::vector<std::string>& input_paths,
                           const std::string& extra_config = {}) {
    Provenance prov;
    prov.tool = tool;
    json cj = json::parse(run_config_to_json(cfg));
    if (!extra_config.empty()) cj.update(json::parse(extra_config));
    prov.config_json = cj.dump();
    for (const std::string& p : input_paths) prov.inputs.push_back({p, digest_file(p)});
    return prov;
}

// Pairs each id of `ids` with its probability vector; requires the two id
// sets to coincide.
std::vector<ProbabilityVector> match_probabilities(const std::vector<std::string>& ids,
                                                   const std::vector<ProbabilityRecord>& probs,
                                                   const std::string& which) {
    std::map<std::string, const ProbabilityVector*> by_id;
    for (const ProbabilityRecord& rec : probs) by_id[rec.id] = &rec.p;
    if (by_id.size() != ids.size()) {
        throw ValidationError(which + ": id set does not match (got " +
                              std::to_string(by_id.size()) + " rows for " +
                              std::to_string(ids.size()) + " items)");
    }
    std::vector<ProbabilityVector> out;
    out.reserve(ids.size());
    for (const std::string& id : ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw ValidationError(which + ": missing id '" + id + "'");
        out.push_back(*it->second);
    }
    return out;
}

int cmd_align(const Args& a) {
    const RunConfig cfg = effective_config(a);
    const auto records = load_landmarks(a.landmarks);
    std::vector<AlignedRecord> aligned;
    aligned.reserve(records.size());
    for (const LandmarkRecord& rec : records) {
        try {
            aligned.push_back({rec.id, align(rec.landmarks, cfg.targets)});
        } catch (const GeometryError& e) {
            throw GeometryError("id '" + rec.id + "': " + e.what());
        }
    }
    const Provenance prov = make_provenance("align", cfg, {a.landmarks});
    save_aligned(a.out, aligned, &prov);
    std::cout << "aligned " << aligned.size() << " faces -> " << a.out << "\n";
    return 0;
}

int cmd_featurize(const Args& a) {
    const RunConfig cfg = effective_config(a);
    const auto table = resolve_angle_table(cfg);
    const std::string table_hash = angle_table_hash(table);
    const auto aligned = load_aligned(a.landmarks);
    if (aligned.empty()) throw ValidationError("no faces to featurize");

    std::vector<std::vector<double>> raw;
    raw.reserve(aligned.size());
    for (const AlignedRecord& rec : aligned) raw.push_back(featurize(rec.aligned, table));

    StatsDocument doc;
    std::vector<std::string> inputs = {a.landmarks};
    if (a.fit_stats) {
        doc.stats = fit_stats(raw);
        doc.align_targets = cfg.targets;
        doc.angle_table_hash = table_hash;
        const Provenance stats_prov = make_provenance("featurize", cfg, inputs);
        save_stats(a.stats, doc, &stats_prov);
    } else {
        doc = load_stats(a.stats);
        if (doc.angle_table_hash != table_hash) {
            throw ValidationError("angle table hash mismatch: stats were fitted with " +
                                  doc.angle_table_hash + ", current table is " + table_hash);
        }
        inputs.push_back(a.stats);
    }

    std::vector<FeatureRecord> out;
    out.reserve(aligned.size());
    for (std::size_t i = 0; i < aligned.size(); ++i) {
        out.push_back({aligned[i].id, standardize(raw[i], doc.stats)});
    }
    const Provenance prov =
        make_provenance("featurize", cfg, inputs, "{\"angle_table_hash\":\"" + table_hash + "\"}");
    save_features(a.out, out, &prov);
    std::cout << "featurized " << out.size() << " faces (" << out.front().values.size()
              << " features) -> " << a.out << "\n";
    return 0;
}

int cmd_train(const Args& a) {
    const RunConfig cfg = effective_config(a);
    const auto features = load_features(a.features);
    if (features.empty()) throw ValidationError("no training rows");
    const auto labels = load_labels(a.labels);
    std::map<std::string, Emotion> label_by_id;
    for (const LabelRecord& rec : labels) label_by_id[rec.id] = rec.label;

    FeatureMatrix X;
    X.rows = features.size();
    X.cols = features.front().values.size();
    X.values.reserve(X.rows * X.cols);
    std::vector<Emotion> y;
    y.reserve(features.size());
    for (const FeatureRecord& rec : features) {
        if (rec.values.size() != X.cols) {
            throw ValidationError("feature rows have inconsistent lengths");
        }
        auto it = label_by_id.find(rec.id);
        if (it == label_by_id.end()) {
            throw ValidationError("no label for id '" + rec.id + "'");
        }
        X.values.insert(X.values.end(), rec.values.begin(), rec.values.end());
        y.push_back(it->second);
    }

    const StatsDocument doc = load_stats(a.stats);
    if (doc.stats.mean.size() != X.cols) {
        throw ValidationError("stats length " + std::to_string(doc.stats.mean.size()) +
                              " does not match feature width " + std::to_string(X.cols));
    }

    GbtModel model = train(X, y, cfg.train);
    model.stats = doc.stats;
    model.align_targets = doc.align_targets;
    model.angle_table_hash = doc.angle_table_hash;

    const Provenance prov = make_provenance("train", cfg, {a.features, a.labels, a.stats});
    save_model(a.out, model, &prov);
    std::cout << "trained " << model.rounds.size() << " rounds on " << X.rows << " faces -> "
              << a.out << "\n";
    return 0;
}

int cmd_predict(const Args& a) {
    const RunConfig cfg = effective_config(a);
    const GbtModel model = load_model(a.model);
    const auto features = load_features(a.features);
    std::vector<ProbabilityRecord> out;
    out.reserve(features.size());
    for (const FeatureRecord& rec : features) {
        out.push_back({rec.id, predict_proba(model, rec.values)});
    }
    const Provenance prov = make_provenance("predict", cfg, {a.model, a.features});
    save_probabilities(a.out, out, &prov);
    std::cout << "predicted " << out.size() << " faces -> " << a.out << "\n";
    return 0;
}

int cmd_importance(const Args& a) {
    const RunConfig cfg = effective_config(a);
    const GbtModel model = load_model(a.model);
    const ImportanceReport report = feature_importance(model);
    const Provenance prov = make_provenance("importance", cfg, {a.model});
    write_text_file(a.out, importance_report_json(report, &prov));
    std::cout << "important features: " << report.important.size() << " of " << report.gain.size()
              << " (" << report.n_important_distances << " distances, " << report.n_important_angles
              << " angles; mean gain " << format_double(report.mean_gain) << ")\n";
    return 0;
}

int cmd_fuse(const Args& a) {
    const RunConfig cfg = effective_config(a);
    const auto probs_a = load_probabilities(a.probs_a);
    std::vector<std::string> ids;
    ids.reserve(probs_a.size());
    for (const ProbabilityRecord& rec : probs_a) ids.push_back(rec.id);
    const auto pB = match_probabilities(ids, load_probabilities(a.probs_b), "probs-b");

    std::vector<ProbabilityRecord> out;
    out.reserve(probs_a.size());
    for (std::size_t i = 0; i < probs_a.size(); ++i) {
        out.push_back({probs_a[i].id, fuse(cfg.fusion_method, probs_a[i].p, pB[i]).q});
    }
    const Provenance prov = make_provenance("fuse", cfg, {a.probs_a, a.probs_b});
    save_probabilities(a.out, out, &prov);
    std::cout << "fused " << out.size() << " predictions (" << to_string(cfg.fusion_method)
              << ") -> " << a.out << "\n";
    return 0;
}

int cmd_evaluate(const Args& a) {
    const RunConfig cfg = effective_config(a);
    const auto labels = load_labels(a.labels);
    if (labels.empty()) throw ValidationError("no evaluation items");
    std::vector<std::string> ids;
    std::vector<Emotion> truth;
    for (const LabelRecord& rec : labels) {
        ids.push_back(rec.id);
        truth.push_back(rec.label);
    }
    const auto probs = match_probabilities(ids, load_probabilities(a.probs_a), "probs-a");

    std::vector<Emotion> preds;
    std::vector<double> entropies;
    preds.reserve(probs.size());
    entropies.reserve(probs.size());
    for (const ProbabilityVector& p : probs) {
        preds.push_back(forced_choice(p));
        entropies.push_back(entropy(p));
    }
    const EvaluationReport report = evaluate(preds, truth, entropies, cfg.bin_width);
    const Provenance prov = make_provenance("evaluate", cfg, {a.probs_a, a.labels});
    write_text_file(a.out, evaluation_report_json(report, &prov));
    std::cout << render_evaluation(report);
    return 0;
}

int cmd_agreement(const Args& a) {
    const RunConfig cfg = effective_config(a);
    const auto labels = load_labels(a.labels);
    if (labels.empty()) throw ValidationError("no items");
    std::vector<std::string> ids;
    std::vector<Emotion> truth;
    for (const LabelRecord& rec : labels) {
        ids.push_back(rec.id);
        truth.push_back(rec.label);
    }
    const auto pA = match_probabilities(ids, load_probabilities(a.probs_a), "probs-a");
    const auto pB = match_probabilities(ids, load_probabilities(a.probs_b), "probs-b");

    std::vector<Emotion> predsA, predsB;
    std::vector<double> confA, confB;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        predsA.push_back(forced_choice(pA[i]));
        predsB.push_back(forced_choice(pB[i]));
        confA.push_back(pA[i][static_cast<int>(predsA[i])]);
        confB.push_back(pB[i][static_cast<int>(predsB[i])]);
    }
    const AgreementReport report = agreement_breakdown(predsA, predsB, confA, confB, truth);
    const ConfusionMatrix cross = cross_method_matrix(predsA, predsB);
    const Provenance prov = make_provenance("agreement", cfg, {a.probs_a, a.probs_b, a.labels});
    write_text_file(a.out, agreement_report_json(report, cross, &prov));
    std::cout << render_agreement(report, cross);
    return 0;
}

int cmd_subset(const Args& a) {
    const RunConfig cfg = effective_config(a);
    const Manifest manifest = manifest_from_labels(load_labels(a.labels));
    const Manifest subset = balanced_subset(manifest, cfg.seed);
    const Provenance prov = make_provenance("subset", cfg, {a.labels});
    save_labels(a.out, manifest_to_labels(subset), &prov);
    std::cout << "subset " << subset.size() << " of " << manifest.size() << " records -> " << a.out
              << "\n";
    return 0;
}

int cmd_split(const Args& a) {
    const RunConfig cfg = effective_config(a);
    const Manifest manifest = manifest_from_labels(load_labels(a.labels));
    const SplitResult split = split_train_test(manifest, cfg.split_ratio, cfg.seed);
    const Provenance prov = make_provenance("split", cfg, {a.labels});
    save_labels(a.out_train, manifest_to_labels(split.train), &prov);
    save_labels(a.out_test, manifest_to_labels(split.test), &prov);
    std::cout << "split " << manifest.size() << " records into " << split.train.size()
              << " train / " << split.test.size() << " test\n";
    return 0;
}

int cmd_dedup(const Args& a) {
    const RunConfig cfg = effective_config(a);
    const Manifest manifest = manifest_from_labels(load_labels(a.labels));
    const auto landmarks = load_landmarks(a.landmarks);
    const Manifest kept = dedup(manifest, landmarks);
    const Provenance prov = make_provenance("dedup", cfg, {a.labels, a.landmarks});
    save_labels(a.out, manifest_to_labels(kept), &prov);
    std::cout << "dedup kept " << kept.size() << " of " << manifest.size() << " records -> "
              << a.out << "\n";
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Facial-emotion pipeline: landmark alignment, geometric features, "
                 "boosted-tree classification, probability fusion, evaluation"};
    app.require_subcommand(1);

    Args a;

    auto add_common = [&a](CLI::App* cmd) {
        cmd->add_option("--config", a.config, "JSON run configuration");
        cmd->add_option("--seed", a.seed, "seed override")->each([&a](const std::string&) {
            a.seed_set = true;
        });
    };

    CLI::App* align_cmd = app.add_subcommand("align", "canonicalize raw landmark sets");
    add_common(align_cmd);
    align_cmd->add_option("--landmarks", a.landmarks, "raw landmark CSV")->required();
    align_cmd->add_option("--out", a.out, "aligned CSV to write")->required();

    CLI::App* feat_cmd = app.add_subcommand("featurize", "distances + angles, standardized");
    add_common(feat_cmd);
    feat_cmd->add_option("--landmarks", a.landmarks, "aligned CSV (from `align`)")->required();
    feat_cmd->add_option("--angle-table", a.angle_table, "angle table CSV")
        ->each([&a](const std::string&) { a.angle_table_set = true; });
    feat_cmd->add_flag("--fit-stats", a.fit_stats, "fit standardization stats on this data");
    feat_cmd->add_option("--stats", a.stats, "stats JSON (written with --fit-stats, read otherwise)")
        ->required();
    feat_cmd->add_option("--out", a.out, "feature CSV to write")->required();

    CLI::App* train_cmd = app.add_subcommand("train", "fit the boosted-tree classifier");
    add_common(train_cmd);
    train_cmd->add_option("--features", a.features, "standardized feature CSV")->required();
    train_cmd->add_option("--labels", a.labels, "label CSV")->required();
    train_cmd->add_option("--stats", a.stats, "stats JSON from featurize --fit-stats")->required();
    train_cmd->add_option("--out", a.out, "model JSON to write")->required();

    CLI::App* predict_cmd = app.add_subcommand("predict", "per-face emotion probabilities");
    add_common(predict_cmd);
    predict_cmd->add_option("--model", a.model, "model JSON")->required();
    predict_cmd->add_option("--features", a.features, "standardized feature CSV")->required();
    predict_cmd->add_option("--out", a.out, "probability CSV to write")->required();

    CLI::App* imp_cmd = app.add_subcommand("importance", "per-feature gain report");
    add_common(imp_cmd);
    imp_cmd->add_option("--model", a.model, "model JSON")->required();
    imp_cmd->add_option("--out", a.out, "importance JSON to write")->required();

    CLI::App* fuse_cmd = app.add_subcommand("fuse", "combine two probability files");
    add_common(fuse_cmd);
    fuse_cmd->add_option("--probs-a", a.probs_a, "probability CSV, branch A")->required();
    fuse_cmd->add_option("--probs-b", a.probs_b, "probability CSV, branch B")->required();
    fuse_cmd->add_option("--method", a.method, "sum-softmax|plain-sum|min-entropy")
        ->each([&a](const std::string&) { a.method_set = true; });
    fuse_cmd->add_option("--out", a.out, "fused probability CSV to write")->required();

    CLI::App* eval_cmd = app.add_subcommand("evaluate", "confusion/accuracy/F1/entropy report");
    add_common(eval_cmd);
    eval_cmd->add_option("--probs-a", a.probs_a, "probability CSV to evaluate")->required();
    eval_cmd->add_option("--labels", a.labels, "truth label CSV")->required();
    eval_cmd->add_option("--bin-width", a.bin_width, "entropy bin width (nats)")
        ->each([&a](const std::string&) { a.bin_width_set = true; });
    eval_cmd->add_option("--out", a.out, "report JSON to write")->required();

    CLI::App* agree_cmd = app.add_subcommand("agreement", "two-classifier agreement breakdown");
    add_common(agree_cmd);
    agree_cmd->add_option("--probs-a", a.probs_a, "probability CSV, branch A")->required();
    agree_cmd->add_option("--probs-b", a.probs_b, "probability CSV, branch B")->required();
    agree_cmd->add_option("--labels", a.labels, "truth label CSV")->required();
    agree_cmd->add_option("--out", a.out, "report JSON to write")->required();

    CLI::App* subset_cmd = app.add_subcommand("subset", "balanced per-class subsample");
    add_common(subset_cmd);
    subset_cmd->add_option("--labels", a.labels, "label CSV")->required();
    subset_cmd->add_option("--out", a.out, "label CSV to write")->required();

    CLI::App* split_cmd = app.add_subcommand("split", "stratified train/test split");
    add_common(split_cmd);
    split_cmd->add_option("--labels", a.labels, "label CSV")->required();
    split_cmd->add_option("--ratio", a.ratio, "train fraction in (0,1)")
        ->each([&a](const std::string&) { a.ratio_set = true; });
    split_cmd->add_option("--out-train", a.out_train, "train label CSV to write")->required();
    split_cmd->add_option("--out-test", a.out_test, "test label CSV to write")->required();

    CLI::App* dedup_cmd = app.add_subcommand("dedup", "drop bit-identical landmark rows");
    add_common(dedup_cmd);
    dedup_cmd->add_option("--labels", a.labels, "label CSV")->required();
    dedup_cmd->add_option("--landmarks", a.landmarks, "raw landmark CSV")->required();
    dedup_cmd->add_option("--out", a.out, "label CSV to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (align_cmd->parsed()) return cmd_align(a);
        if (feat_cmd->parsed()) return cmd_featurize(a);
        if (train_cmd->parsed()) return cmd_train(a);
        if (predict_cmd->parsed()) return cmd_predict(a);
        if (imp_cmd->parsed()) return cmd_importance(a);
        if (fuse_cmd->parsed()) return cmd_fuse(a);
        if (eval_cmd->parsed()) return cmd_evaluate(a);
        if (agree_cmd->parsed()) return cmd_agreement(a);
        if (subset_cmd->parsed()) return cmd_subset(a);
        if (split_cmd->parsed()) return cmd_split(a);
        if (dedup_cmd->parsed()) return cmd_dedup(a);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace emofuse
