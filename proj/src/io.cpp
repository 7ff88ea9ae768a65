#include "emofuse/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "emofuse/errors.hpp"
#include "json.hpp"

namespace emofuse {

using nlohmann::json;

// ---- low-level helpers ------------------------------------------------

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, const std::string& file, std::size_t line) {
    double v = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        throw parse_error_at(file, line, "expected a number, got '" + token + "'");
    }
    if (!std::isfinite(v)) {
        throw parse_error_at(file, line, "non-finite value '" + token + "'");
    }
    return v;
}

namespace {

std::int64_t parse_int(const std::string& token, const std::string& file, std::size_t line) {
    std::int64_t v = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        throw parse_error_at(file, line, "expected an integer, got '" + token + "'");
    }
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// One parsed CSV row plus the 1-based file line it came from.
struct CsvRow {
    std::size_t line_no;
    std::vector<std::string> fields;
};

struct CsvFile {
    std::string path;
    std::vector<std::string> header;
    std::size_t header_line = 0;
    std::vector<CsvRow> rows;
};

// Reads a comma-delimited file, skipping '#' comment lines; the first
// non-comment line is the header.
CsvFile read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    CsvFile csv;
    csv.path = path.string();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (csv.header.empty()) {
            csv.header = split_csv(line);
            csv.header_line = line_no;
        } else {
            csv.rows.push_back({line_no, split_csv(line)});
        }
    }
    if (csv.header.empty()) throw ParseError(path.string() + ": missing header line");
    return csv;
}

void require_header(const CsvFile& csv, const std::vector<std::string>& expected) {
    if (csv.header != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size() && i < 6; ++i) {
            want += (i ? "," : "") + expected[i];
        }
        if (expected.size() > 6) want += ",...";
        throw parse_error_at(csv.path, csv.header_line, "header must be '" + want + "'");
    }
}

void require_arity(const CsvFile& csv, const CsvRow& row, std::size_t expected) {
    if (row.fields.size() != expected) {
        throw parse_error_at(csv.path, row.line_no,
                             "expected " + std::to_string(expected) + " columns, got " +
                                 std::to_string(row.fields.size()));
    }
}

std::string require_unique_id(const CsvFile& csv, const CsvRow& row, std::set<std::string>& seen) {
    const std::string& id = row.fields[0];
    if (id.empty()) throw parse_error_at(csv.path, row.line_no, "empty id");
    if (!seen.insert(id).second) {
        throw parse_error_at(csv.path, row.line_no, "duplicate id '" + id + "'");
    }
    return id;
}

class OutFile {
public:
    explicit OutFile(const std::filesystem::path& path) : path_(path.string()), out_(path) {
        if (!out_) throw Error("cannot write " + path_.string());
    }

    void provenance(const Provenance* prov) {
        if (!prov) return;
        out_ << "# emofuse " << prov->tool << "\n";
        if (!prov->config_json.empty()) out_ << "# config " << prov->config_json << "\n";
        for (const auto& [name, digest] : prov->inputs) {
            out_ << "# input " << name << " " << digest << "\n";
        }
    }

    std::ofstream& stream() { return out_; }

    void close() {
        out_.close();
        if (!out_) throw Error("failed writing " + path_.string());
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

std::vector<std::string> landmark_header() {
    std::vector<std::string> h = {"id", "width", "height"};
    for (int i = 0; i < kLandmarkCount; ++i) {
        h.push_back("x" + std::to_string(i));
        h.push_back("y" + std::to_string(i));
    }
    return h;
}

std::vector<std::string> aligned_header() {
    std::vector<std::string> h = {"id", "roll", "scale_x", "scale_y"};
    for (int i = 0; i < kLandmarkCount; ++i) {
        h.push_back("x" + std::to_string(i));
        h.push_back("y" + std::to_string(i));
    }
    return h;
}

std::vector<std::string> probability_header() {
    std::vector<std::string> h = {"id"};
    for (const std::string& name : emotion_names()) h.push_back(name);
    return h;
}

void write_header(std::ofstream& out, const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
}

}  // namespace

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string("fnv1a64:") + buf;
}

std::string digest_file(const std::filesystem::path& path) {
    return fnv1a64_hex(read_text_file(path));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw Error("failed writing " + path.string());
}

// ---- landmark CSV -------------------------------------------------------

std::vector<LandmarkRecord> load_landmarks(const std::filesystem::path& path) {
    const CsvFile csv = read_csv(path);
    require_header(csv, landmark_header());
    std::vector<LandmarkRecord> out;
    out.reserve(csv.rows.size());
    std::set<std::string> seen;
    for (const CsvRow& row : csv.rows) {
        require_arity(csv, row, 3 + 2 * kLandmarkCount);
        LandmarkRecord rec;
        rec.id = require_unique_id(csv, row, seen);
        const std::int64_t w = parse_int(row.fields[1], csv.path, row.line_no);
        const std::int64_t h = parse_int(row.fields[2], csv.path, row.line_no);
        if (w <= 0 || h <= 0) {
            throw parse_error_at(csv.path, row.line_no, "dimensions must be positive");
        }
        rec.landmarks.src_width = static_cast<int>(w);
        rec.landmarks.src_height = static_cast<int>(h);
        for (int i = 0; i < kLandmarkCount; ++i) {
            rec.landmarks.points[i].x = parse_double(row.fields[3 + 2 * i], csv.path, row.line_no);
            rec.landmarks.points[i].y = parse_double(row.fields[4 + 2 * i], csv.path, row.line_no);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

void save_landmarks(const std::filesystem::path& path, const std::vector<LandmarkRecord>& records,
                    const Provenance* prov) {
    OutFile f(path);
    f.provenance(prov);
    write_header(f.stream(), landmark_header());
    for (const LandmarkRecord& rec : records) {
        f.stream() << rec.id << "," << rec.landmarks.src_width << "," << rec.landmarks.src_height;
        for (const Point2& p : rec.landmarks.points) {
            f.stream() << "," << format_double(p.x) << "," << format_double(p.y);
        }
        f.stream() << "\n";
    }
    f.close();
}

// ---- aligned CSV ----------------------------------------------------------

std::vector<AlignedRecord> load_aligned(const std::filesystem::path& path) {
    const CsvFile csv = read_csv(path);
    require_header(csv, aligned_header());
    std::vector<AlignedRecord> out;
    out.reserve(csv.rows.size());
    std::set<std::string> seen;
    for (const CsvRow& row : csv.rows) {
        require_arity(csv, row, 4 + 2 * kLandmarkCount);
        AlignedRecord rec;
        rec.id = require_unique_id(csv, row, seen);
        rec.aligned.roll_applied = parse_double(row.fields[1], csv.path, row.line_no);
        rec.aligned.scale_x = parse_double(row.fields[2], csv.path, row.line_no);
        rec.aligned.scale_y = parse_double(row.fields[3], csv.path, row.line_no);
        if (rec.aligned.scale_x <= 0.0 || rec.aligned.scale_y <= 0.0) {
            throw parse_error_at(csv.path, row.line_no, "scales must be positive");
        }
        for (int i = 0; i < kLandmarkCount; ++i) {
            rec.aligned.points[i].x = parse_double(row.fields[4 + 2 * i], csv.path, row.line_no);
            rec.aligned.points[i].y = parse_double(row.fields[5 + 2 * i], csv.path, row.line_no);
        }
        const auto& pts = rec.aligned.points;
        if (std::abs(pts[kNoseTip].x - kCanvasCenter) > 1e-9 ||
            std::abs(pts[kNoseTip].y - kCanvasCenter) > 1e-9 ||
            std::abs(pts[kNoseBridge].x - pts[kNoseTip].x) > 1e-9 ||
            pts[kNoseBridge].y >= pts[kNoseTip].y) {
            throw parse_error_at(csv.path, row.line_no,
                                 "row is not in canonical pose (is this an aligned file?)");
        }
        out.push_back(std::move(rec));
    }
    return out;
}

void save_aligned(const std::filesystem::path& path, const std::vector<AlignedRecord>& records,
                  const Provenance* prov) {
    OutFile f(path);
    f.provenance(prov);
    write_header(f.stream(), aligned_header());
    for (const AlignedRecord& rec : records) {
        f.stream() << rec.id << "," << format_double(rec.aligned.roll_applied) << ","
                   << format_double(rec.aligned.scale_x) << ","
                   << format_double(rec.aligned.scale_y);
        for (const Point2& p : rec.aligned.points) {
            f.stream() << "," << format_double(p.x) << "," << format_double(p.y);
        }
        f.stream() << "\n";
    }
    f.close();
}

// ---- probability CSV ------------------------------------------------------

std::vector<ProbabilityRecord> load_probabilities(const std::filesystem::path& path) {
    const CsvFile csv = read_csv(path);
    require_header(csv, probability_header());
    std::vector<ProbabilityRecord> out;
    out.reserve(csv.rows.size());
    std::set<std::string> seen;
    for (const CsvRow& row : csv.rows) {
        require_arity(csv, row, 1 + kEmotionCount);
        ProbabilityRecord rec;
        rec.id = require_unique_id(csv, row, seen);
        double sum = 0.0;
        for (int i = 0; i < kEmotionCount; ++i) {
            const double v = parse_double(row.fields[1 + i], csv.path, row.line_no);
            if (v < 0.0) {
                throw parse_error_at(csv.path, row.line_no,
                                     "negative probability for " + emotion_names()[i]);
            }
            rec.p[i] = v;
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            throw parse_error_at(csv.path, row.line_no,
                                 "probabilities sum to " + format_double(sum) +
                                     ", outside 1 +/- 1e-06");
        }
        for (double& v : rec.p) v /= sum;
        out.push_back(rec);
    }
    return out;
}

void save_probabilities(const std::filesystem::path& path,
                        const std::vector<ProbabilityRecord>& records, const Provenance* prov) {
    OutFile f(path);
    f.provenance(prov);
    write_header(f.stream(), probability_header());
    for (const ProbabilityRecord& rec : records) {
        f.stream() << rec.id;
        for (double v : rec.p) f.stream() << "," << format_double(v);
        f.stream() << "\n";
    }
    f.close();
}

// ---- label CSV -------------------------------------------------------------

std::vector<LabelRecord> load_labels(const std::filesystem::path& path) {
    const CsvFile csv = read_csv(path);
    require_header(csv, {"id", "label"});
    std::vector<LabelRecord> out;
    out.reserve(csv.rows.size());
    std::set<std::string> seen;
    for (const CsvRow& row : csv.rows) {
        require_arity(csv, row, 2);
        LabelRecord rec;
        rec.id = require_unique_id(csv, row, seen);
        const auto label = emotion_from_string(row.fields[1]);
        if (!label) {
            throw parse_error_at(csv.path, row.line_no, "unknown label '" + row.fields[1] + "'");
        }
        rec.label = *label;
        out.push_back(std::move(rec));
    }
    return out;
}

void save_labels(const std::filesystem::path& path, const std::vector<LabelRecord>& records,
                 const Provenance* prov) {
    OutFile f(path);
    f.provenance(prov);
    write_header(f.stream(), {"id", "label"});
    for (const LabelRecord& rec : records) {
        f.stream() << rec.id << "," << to_string(rec.label) << "\n";
    }
    f.close();
}

// ---- feature CSV -------------------------------------------------------------

std::vector<FeatureRecord> load_features(const std::filesystem::path& path) {
    const CsvFile csv = read_csv(path);
    if (csv.header.empty() || csv.header[0] != "id" || csv.header.size() < 2) {
        throw parse_error_at(csv.path, csv.header_line, "header must be 'id,f0,f1,...'");
    }
    for (std::size_t k = 1; k < csv.header.size(); ++k) {
        if (csv.header[k] != "f" + std::to_string(k - 1)) {
            throw parse_error_at(csv.path, csv.header_line, "header must be 'id,f0,f1,...'");
        }
    }
    const std::size_t dim = csv.header.size() - 1;
    std::vector<FeatureRecord> out;
    out.reserve(csv.rows.size());
    std::set<std::string> seen;
    for (const CsvRow& row : csv.rows) {
        require_arity(csv, row, 1 + dim);
        FeatureRecord rec;
        rec.id = require_unique_id(csv, row, seen);
        rec.values.reserve(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            rec.values.push_back(parse_double(row.fields[1 + k], csv.path, row.line_no));
        }
        out.push_back(std::move(rec));
    }
    return out;
}

void save_features(const std::filesystem::path& path, const std::vector<FeatureRecord>& records,
                   const Provenance* prov) {
    if (records.empty()) throw ValidationError("refusing to write an empty feature file");
    const std::size_t dim = records.front().values.size();
    OutFile f(path);
    f.provenance(prov);
    f.stream() << "id";
    for (std::size_t k = 0; k < dim; ++k) f.stream() << ",f" << k;
    f.stream() << "\n";
    for (const FeatureRecord& rec : records) {
        if (rec.values.size() != dim) {
            throw ValidationError("feature rows have inconsistent lengths");
        }
        f.stream() << rec.id;
        for (double v : rec.values) f.stream() << "," << format_double(v);
        f.stream() << "\n";
    }
    f.close();
}

// ---- angle table ---------------------------------------------------------------

std::vector<AngleSpec> load_angle_table(const std::filesystem::path& path) {
    const CsvFile csv = read_csv(path);
    require_header(csv, {"name", "a", "vertex", "b", "region"});
    std::vector<AngleSpec> table;
    table.reserve(csv.rows.size());
    for (const CsvRow& row : csv.rows) {
        require_arity(csv, row, 5);
        AngleSpec spec;
        spec.name = row.fields[0];
        spec.a = static_cast<int>(parse_int(row.fields[1], csv.path, row.line_no));
        spec.vertex = static_cast<int>(parse_int(row.fields[2], csv.path, row.line_no));
        spec.b = static_cast<int>(parse_int(row.fields[3], csv.path, row.line_no));
        try {
            spec.region = face_region_from_string(row.fields[4]);
        } catch (const ValidationError& e) {
            throw parse_error_at(csv.path, row.line_no, e.what());
        }
        table.push_back(std::move(spec));
    }
    try {
        validate_angle_table(table);
    } catch (const ValidationError& e) {
        throw ParseError(csv.path + ": " + e.what());
    }
    return table;
}

std::string angle_table_canonical(const std::vector<AngleSpec>& table) {
    std::string out = "name,a,vertex,b,region\n";
    for (const AngleSpec& s : table) {
        out += s.name + "," + std::to_string(s.a) + "," + std::to_string(s.vertex) + "," +
               std::to_string(s.b) + "," + to_string(s.region) + "\n";
    }
    return out;
}

void save_angle_table(const std::filesystem::path& path, const std::vector<AngleSpec>& table) {
    write_text_file(path, angle_table_canonical(table));
}

std::string angle_table_hash(const std::vector<AngleSpec>& table) {
    return fnv1a64_hex(angle_table_canonical(table));
}

// ---- JSON helpers -----------------------------------------------------------------

namespace {

json provenance_json(const Provenance* prov) {
    json j = json::object();
    if (!prov) return j;
    j["tool"] = prov->tool;
    if (!prov->config_json.empty()) j["config"] = json::parse(prov->config_json);
    json inputs = json::array();
    for (const auto& [name, digest] : prov->inputs) {
        inputs.push_back({{"path", name}, {"digest", digest}});
    }
    j["inputs"] = inputs;
    return j;
}

json stats_json(const FeatureStats& stats) {
    return {{"mean", stats.mean}, {"stddev", stats.stddev}, {"n_fit", stats.n_fit}};
}

FeatureStats stats_from_json(const json& j) {
    FeatureStats stats;
    stats.mean = j.at("mean").get<std::vector<double>>();
    stats.stddev = j.at("stddev").get<std::vector<double>>();
    stats.n_fit = j.at("n_fit").get<std::int64_t>();
    if (stats.mean.size() != stats.stddev.size()) {
        throw ValidationError("stats mean/stddev lengths differ");
    }
    for (double s : stats.stddev) {
        if (!(s >= 0.0)) throw ValidationError("stats stddev entries must be >= 0");
    }
    return stats;
}

json targets_json(const AlignTargets& t) {
    return {{"nose_length", t.nose_length}, {"eye_width", t.eye_width}};
}

AlignTargets targets_from_json(const json& j) {
    AlignTargets t;
    t.nose_length = j.at("nose_length").get<double>();
    t.eye_width = j.at("eye_width").get<double>();
    return t;
}

json config_json(const TrainConfig& cfg) {
    return {{"rounds", cfg.rounds},
            {"max_depth", cfg.max_depth},
            {"learning_rate", cfg.learning_rate},
            {"lambda", cfg.lambda},
            {"min_child_weight", cfg.min_child_weight},
            {"seed", cfg.seed}};
}

TrainConfig config_from_json(const json& j) {
    TrainConfig cfg;
    cfg.rounds = j.at("rounds").get<int>();
    cfg.max_depth = j.at("max_depth").get<int>();
    cfg.learning_rate = j.at("learning_rate").get<double>();
    cfg.lambda = j.at("lambda").get<double>();
    cfg.min_child_weight = j.at("min_child_weight").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

json tree_json(const RegressionTree& tree) {
    json nodes = json::array();
    for (const TreeNode& n : tree.nodes) {
        if (n.is_leaf()) {
            nodes.push_back({{"weight", n.weight}});
        } else {
            nodes.push_back({{"feature", n.feature},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right},
                             {"gain", n.gain}});
        }
    }
    return {{"nodes", nodes}};
}

RegressionTree tree_from_json(const json& j, std::size_t num_features) {
    RegressionTree tree;
    const json& nodes = j.at("nodes");
    const int n = static_cast<int>(nodes.size());
    if (n == 0) throw ValidationError("tree has no nodes");
    tree.nodes.reserve(n);
    for (const json& nj : nodes) {
        TreeNode node;
        if (nj.contains("weight")) {
            node.weight = nj.at("weight").get<double>();
        } else {
            node.feature = nj.at("feature").get<int>();
            node.threshold = nj.at("threshold").get<double>();
            node.left = nj.at("left").get<int>();
            node.right = nj.at("right").get<int>();
            node.gain = nj.at("gain").get<double>();
            if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= num_features) {
                throw ValidationError("tree node references feature outside the model width");
            }
            if (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n) {
                throw ValidationError("tree node child index out of range");
            }
        }
        tree.nodes.push_back(node);
    }
    return tree;
}

}  // namespace

// ---- stats document -----------------------------------------------------------------

void save_stats(const std::filesystem::path& path, const StatsDocument& doc,
                const Provenance* prov) {
    json j;
    j["format"] = "emofuse-stats";
    j["version"] = 1;
    j["stats"] = stats_json(doc.stats);
    j["align_targets"] = targets_json(doc.align_targets);
    j["angle_table_hash"] = doc.angle_table_hash;
    if (prov) j["provenance"] = provenance_json(prov);
    write_text_file(path, j.dump(1) + "\n");
}

StatsDocument load_stats(const std::filesystem::path& path) {
    StatsDocument doc;
    try {
        const json j = json::parse(read_text_file(path));
        if (j.at("format").get<std::string>() != "emofuse-stats") {
            throw ValidationError("not a stats file");
        }
        doc.stats = stats_from_json(j.at("stats"));
        doc.align_targets = targets_from_json(j.at("align_targets"));
        doc.angle_table_hash = j.at("angle_table_hash").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return doc;
}

// ---- model document ------------------------------------------------------------------

std::string model_to_json(const GbtModel& model, const Provenance* prov) {
    json j;
    j["format"] = "emofuse-model";
    j["version"] = 1;
    j["config"] = config_json(model.config);
    j["learning_rate"] = model.config.learning_rate;
    j["base_score"] = model.base_score;
    j["num_features"] = model.num_features;
    j["stats"] = stats_json(model.stats);
    j["align_targets"] = targets_json(model.align_targets);
    j["angle_table_hash"] = model.angle_table_hash;
    json rounds = json::array();
    for (const auto& round_trees : model.rounds) {
        json round = json::array();
        for (const RegressionTree& tree : round_trees) round.push_back(tree_json(tree));
        rounds.push_back(round);
    }
    j["trees"] = rounds;
    if (prov) j["provenance"] = provenance_json(prov);
    return j.dump() + "\n";
}

GbtModel model_from_json(const std::string& text, const std::string& context) {
    GbtModel model;
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != "emofuse-model") {
            throw ValidationError("not a model file");
        }
        model.config = config_from_json(j.at("config"));
        if (j.at("learning_rate").get<double>() != model.config.learning_rate) {
            throw ValidationError("learning_rate disagrees with config");
        }
        model.base_score = j.at("base_score").get<double>();
        model.num_features = j.at("num_features").get<std::size_t>();
        model.stats = stats_from_json(j.at("stats"));
        model.align_targets = targets_from_json(j.at("align_targets"));
        model.angle_table_hash = j.at("angle_table_hash").get<std::string>();
        if (!model.stats.mean.empty() && model.stats.mean.size() != model.num_features) {
            throw ValidationError("stats length disagrees with num_features");
        }
        for (const json& round : j.at("trees")) {
            if (round.size() != kEmotionCount) {
                throw ValidationError("every round must have exactly 8 trees");
            }
            std::array<RegressionTree, kEmotionCount> round_trees;
            for (int k = 0; k < kEmotionCount; ++k) {
                round_trees[k] = tree_from_json(round[k], model.num_features);
            }
            model.rounds.push_back(std::move(round_trees));
        }
    } catch (const json::exception& e) {
        throw ParseError(context + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ParseError(context + ": " + e.what());
    }
    return model;
}

void save_model(const std::filesystem::path& path, const GbtModel& model, const Provenance* prov) {
    write_text_file(path, model_to_json(model, prov));
}

GbtModel load_model(const std::filesystem::path& path) {
    return model_from_json(read_text_file(path), path.string());
}

// ---- reports ------------------------------------------------------------------------

namespace {

json confusion_json(const ConfusionMatrix& m) {
    json j;
    j["labels"] = emotion_names();
    j["counts"] = m.counts;
    j["row_normalized"] = m.row_normalized;
    j["empty_rows"] = m.empty_row;
    return j;
}

json curve_json(const EntropyAccuracyCurve& curve) {
    json bins = json::array();
    for (const EntropyBin& b : curve.bins) {
        json bj = {{"lo", b.lo}, {"hi", b.hi}, {"n", b.n}};
        if (b.accuracy) {
            bj["accuracy"] = *b.accuracy;
        } else {
            bj["accuracy"] = nullptr;
        }
        bins.push_back(bj);
    }
    return {{"bin_width", curve.bin_width}, {"bins", bins}};
}

std::string sig4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

std::string evaluation_report_json(const EvaluationReport& report, const Provenance* prov) {
    json j;
    j["format"] = "emofuse-evaluation";
    j["version"] = 1;
    j["n_items"] = report.confusion.total();
    j["accuracy"] = report.accuracy;
    j["macro_f1"] = report.macro_f1;
    j["per_class_f1"] = report.per_class_f1;
    j["confusion"] = confusion_json(report.confusion);
    j["entropy_accuracy_curve"] = curve_json(report.curve);
    if (prov) j["provenance"] = provenance_json(prov);
    return j.dump(1) + "\n";
}

std::string importance_report_json(const ImportanceReport& report, const Provenance* prov) {
    json j;
    j["format"] = "emofuse-importance";
    j["version"] = 1;
    j["mean_gain"] = report.mean_gain;
    j["n_important"] = report.important.size();
    j["n_important_distances"] = report.n_important_distances;
    j["n_important_angles"] = report.n_important_angles;
    j["important"] = report.important;
    j["gain"] = report.gain;
    if (prov) j["provenance"] = provenance_json(prov);
    return j.dump(1) + "\n";
}

std::string agreement_report_json(const AgreementReport& report, const ConfusionMatrix& cross,
                                  const Provenance* prov) {
    json j;
    j["format"] = "emofuse-agreement";
    j["version"] = 1;
    j["n_total"] = report.n_total;
    j["n_agree"] = report.n_agree;
    j["n_disagree"] = report.n_disagree;
    j["n_both_correct_when_agree"] = report.n_both_correct_when_agree;
    j["n_higher_conf_correct"] = report.n_higher_conf_correct;
    j["n_lower_conf_correct"] = report.n_lower_conf_correct;
    j["n_neither_correct"] = report.n_neither_correct;
    j["n_conf_ties"] = report.n_conf_ties;
    j["kappa"] = report.kappa;
    j["cross_method"] = confusion_json(cross);
    if (prov) j["provenance"] = provenance_json(prov);
    return j.dump(1) + "\n";
}

std::string render_confusion(const ConfusionMatrix& m) {
    std::ostringstream out;
    out << std::string(10, ' ');
    for (const std::string& name : emotion_names()) out << " " << name.substr(0, 8);
    out << "\n";
    for (int r = 0; r < kEmotionCount; ++r) {
        std::string row_name = emotion_names()[r];
        row_name.resize(10, ' ');
        out << row_name;
        for (int c = 0; c < kEmotionCount; ++c) {
            std::string cell = m.empty_row[r] ? "-" : sig4(m.row_normalized[r][c]);
            out << " " << cell;
            if (cell.size() < emotion_names()[c].substr(0, 8).size()) {
                out << std::string(emotion_names()[c].substr(0, 8).size() - cell.size(), ' ');
            }
        }
        out << "\n";
    }
    return out.str();
}

std::string render_evaluation(const EvaluationReport& report) {
    std::ostringstream out;
    out << "items:    " << report.confusion.total() << "\n";
    out << "accuracy: " << sig4(report.accuracy) << "\n";
    out << "macro F1: " << sig4(report.macro_f1) << "\n";
    out << "per-class F1:";
    for (int k = 0; k < kEmotionCount; ++k) {
        out << " " << emotion_names()[k] << "=" << sig4(report.per_class_f1[k]);
    }
    out << "\n\nconfusion (rows = truth, columns = predicted, row-normalized):\n";
    out << render_confusion(report.confusion);
    out << "\nentropy-accuracy curve (bin_width " << format_double(report.curve.bin_width)
        << "):\n";
    for (const EntropyBin& b : report.curve.bins) {
        out << "  [" << sig4(b.lo) << ", " << sig4(b.hi) << "] n=" << b.n;
        if (b.accuracy) out << " accuracy=" << sig4(*b.accuracy);
        out << "\n";
    }
    return out.str();
}

std::string render_agreement(const AgreementReport& report, const ConfusionMatrix& cross) {
    std::ostringstream out;
    out << "items:                      " << report.n_total << "\n";
    out << "agree:                      " << report.n_agree << "\n";
    out << "disagree:                   " << report.n_disagree << "\n";
    out << "both correct when agreeing: " << report.n_both_correct_when_agree << "\n";
    out << "higher-confidence correct:  " << report.n_higher_conf_correct << "\n";
    out << "lower-confidence correct:   " << report.n_lower_conf_correct << "\n";
    out << "neither correct:            " << report.n_neither_correct << "\n";
    out << "confidence ties:            " << report.n_conf_ties << "\n";
    out << "Cohen's kappa:              " << sig4(report.kappa) << "\n";
    out << "\ncross-method matrix (rows = method A, columns = method B, row-normalized):\n";
    out << render_confusion(cross);
    return out.str();
}

}  // namespace emofuse
