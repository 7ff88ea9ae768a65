#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "emofuse/alignment.hpp"
#include "emofuse/emotion.hpp"
#include "emofuse/features.hpp"
#include "emofuse/gbt.hpp"
#include "emofuse/metrics.hpp"

namespace emofuse {

// ---- low-level helpers ------------------------------------------------

// Shortest round-trip decimal rendering (locale independent).
std::string format_double(double v);

// Strict double parser; the whole token must be consumed and finite.
double parse_double(const std::string& token, const std::string& file, std::size_t line);

// FNV-1a 64-bit, rendered as "fnv1a64:<16 hex digits>".
std::string fnv1a64_hex(const std::string& bytes);
std::string digest_file(const std::filesystem::path& path);

// ---- records ----------------------------------------------------------

struct LandmarkRecord {
    std::string id;
    LandmarkSet landmarks;
};

struct AlignedRecord {
    std::string id;
    AlignedLandmarks aligned;
};

struct ProbabilityRecord {
    std::string id;
    ProbabilityVector p;
};

struct LabelRecord {
    std::string id;
    Emotion label;
};

struct FeatureRecord {
    std::string id;
    std::vector<double> values;
};

// Leading comment block written into every CSV output; readers skip it.
struct Provenance {
    std::string tool;                                       // subcommand name
    std::string config_json;                                // single-line JSON
    std::vector<std::pair<std::string, std::string>> inputs;  // (path, digest)
};

// ---- CSV files (schemas fixed in FORMATS.md) ---------------------------

std::vector<LandmarkRecord> load_landmarks(const std::filesystem::path& path);
void save_landmarks(const std::filesystem::path& path, const std::vector<LandmarkRecord>& records,
                    const Provenance* prov = nullptr);

std::vector<AlignedRecord> load_aligned(const std::filesystem::path& path);
void save_aligned(const std::filesystem::path& path, const std::vector<AlignedRecord>& records,
                  const Provenance* prov = nullptr);

std::vector<ProbabilityRecord> load_probabilities(const std::filesystem::path& path);
void save_probabilities(const std::filesystem::path& path,
                        const std::vector<ProbabilityRecord>& records,
                        const Provenance* prov = nullptr);

std::vector<LabelRecord> load_labels(const std::filesystem::path& path);
void save_labels(const std::filesystem::path& path, const std::vector<LabelRecord>& records,
                 const Provenance* prov = nullptr);

std::vector<FeatureRecord> load_features(const std::filesystem::path& path);
void save_features(const std::filesystem::path& path, const std::vector<FeatureRecord>& records,
                   const Provenance* prov = nullptr);

// ---- angle table --------------------------------------------------------

std::vector<AngleSpec> load_angle_table(const std::filesystem::path& path);
void save_angle_table(const std::filesystem::path& path, const std::vector<AngleSpec>& table);

// Canonical serialization of a table (header + rows, LF endings).
std::string angle_table_canonical(const std::vector<AngleSpec>& table);

// Digest of the canonical serialization; stored in stats and model files.
std::string angle_table_hash(const std::vector<AngleSpec>& table);

// ---- JSON documents -----------------------------------------------------

// Featurization context: the standardization statistics plus the alignment
// targets and angle table they were computed with.
struct StatsDocument {
    FeatureStats stats;
    AlignTargets align_targets;
    std::string angle_table_hash;
};

void save_stats(const std::filesystem::path& path, const StatsDocument& doc,
                const Provenance* prov = nullptr);
StatsDocument load_stats(const std::filesystem::path& path);

std::string model_to_json(const GbtModel& model, const Provenance* prov = nullptr);
GbtModel model_from_json(const std::string& text, const std::string& context);
void save_model(const std::filesystem::path& path, const GbtModel& model,
                const Provenance* prov = nullptr);
GbtModel load_model(const std::filesystem::path& path);

// ---- report rendering -----------------------------------------------------

std::string evaluation_report_json(const EvaluationReport& report, const Provenance* prov);
std::string agreement_report_json(const AgreementReport& report, const ConfusionMatrix& cross,
                                  const Provenance* prov);
std::string importance_report_json(const ImportanceReport& report, const Provenance* prov);

// Human-readable summaries (row-normalized matrices at 4 significant digits).
std::string render_confusion(const ConfusionMatrix& m);
std::string render_evaluation(const EvaluationReport& report);
std::string render_agreement(const AgreementReport& report, const ConfusionMatrix& cross);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace emofuse
