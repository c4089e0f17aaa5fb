#include "emolab/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_set>

#include "emolab/csv.hpp"
#include "emolab/error.hpp"
#include "emolab/rng.hpp"

namespace emolab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::uint8_t parse_label(std::string_view cell, std::size_t row, std::string_view column) {
    const auto v = trim(cell);
    if (v == "0") return 0;
    if (v == "1") return 1;
    throw DataError("row " + std::to_string(row) + ", column '" + std::string(column) +
                    "': label must be 0 or 1, got '" + std::string(cell) + "'");
}

struct HeaderLayout {
    std::optional<std::size_t> id;
    std::optional<std::size_t> text;
    std::vector<std::size_t> emotion_columns;
    std::vector<std::string> emotions;
};

HeaderLayout read_header(const csv::Row& header) {
    HeaderLayout h;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name(trim(header[c]));
        if (name == "id" && !h.id) {
            h.id = c;
        } else if (name == "text" && !h.text) {
            h.text = c;
        } else {
            h.emotion_columns.push_back(c);
            h.emotions.push_back(name);
        }
    }
    if (!h.id) throw DataError("header is missing the 'id' column");
    if (h.emotions.empty()) throw DataError("header has no emotion columns");
    return h;
}

void check_width(const csv::Row& row, std::size_t width, std::size_t line) {
    if (row.size() != width) {
        throw DataError("row " + std::to_string(line) + ": expected " + std::to_string(width) +
                        " fields, got " + std::to_string(row.size()));
    }
}

}  // namespace

EmotionSchema::EmotionSchema(std::vector<std::string> emotions) : emotions_(std::move(emotions)) {
    if (emotions_.empty()) throw DataError("emotion schema is empty");
    std::unordered_set<std::string_view> seen;
    for (const auto& e : emotions_) {
        if (e.empty()) throw DataError("emotion name is empty");
        for (unsigned char c : e) {
            if (std::isupper(c)) throw DataError("emotion name must be lowercase: '" + e + "'");
        }
        if (!seen.insert(e).second) throw DataError("duplicate emotion name: '" + e + "'");
    }
}

std::optional<std::size_t> EmotionSchema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < emotions_.size(); ++i) {
        if (emotions_[i] == name) return i;
    }
    return std::nullopt;
}

LabeledDataset::LabeledDataset(std::string language, EmotionSchema schema,
                               std::vector<Record> records)
    : language_(std::move(language)), schema_(std::move(schema)), records_(std::move(records)) {
    if (schema_.k() == 0) throw DataError("dataset schema is empty");
    index_.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (r.labels.size() != schema_.k()) {
            throw DataError("record '" + r.id + "' has " + std::to_string(r.labels.size()) +
                            " labels, expected " + std::to_string(schema_.k()));
        }
        for (auto v : r.labels) {
            if (v > 1) throw DataError("record '" + r.id + "' has a label outside {0,1}");
        }
        if (!index_.emplace(r.id, i).second) throw DataError("duplicate record id: '" + r.id + "'");
    }
}

std::optional<std::size_t> LabeledDataset::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> LabeledDataset::ids() const {
    std::vector<std::string> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.id);
    return out;
}

BinaryMatrix LabeledDataset::label_matrix() const {
    BinaryMatrix m(records_.size(), k());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        std::copy(records_[i].labels.begin(), records_[i].labels.end(), m.row(i).begin());
    }
    return m;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
    std::vector<Record> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(records_.at(i));
    return LabeledDataset(language_, schema_, std::move(out));
}

LabeledDataset parse_dataset(std::string_view csv_text, std::string language) {
    const auto rows = csv::parse(csv_text);
    if (rows.empty()) throw DataError("dataset file is empty (no header)");
    const auto h = read_header(rows[0]);
    if (!h.text) throw DataError("header is missing the 'text' column");
    EmotionSchema schema(h.emotions);

    std::vector<Record> records;
    records.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        check_width(row, rows[0].size(), r + 1);
        Record rec;
        rec.id = row[*h.id];
        rec.text = row[*h.text];
        rec.labels.reserve(schema.k());
        for (std::size_t j = 0; j < schema.k(); ++j) {
            rec.labels.push_back(parse_label(row[h.emotion_columns[j]], r + 1, schema[j]));
        }
        records.push_back(std::move(rec));
    }
    return LabeledDataset(std::move(language), std::move(schema), std::move(records));
}

LabeledDataset load_dataset(const std::filesystem::path& path, std::string language) {
    try {
        return parse_dataset(csv::read_file(path), std::move(language));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string dataset_to_csv(const LabeledDataset& ds) {
    std::vector<std::string> fields{"id", "text"};
    fields.insert(fields.end(), ds.schema().emotions().begin(), ds.schema().emotions().end());
    std::string out = csv::format_row(fields);
    for (const auto& r : ds.records()) {
        fields.assign({r.id, r.text});
        for (auto v : r.labels) fields.push_back(v ? "1" : "0");
        out += csv::format_row(fields);
    }
    return out;
}

void write_dataset(const LabeledDataset& ds, const std::filesystem::path& path) {
    csv::write_file(path, dataset_to_csv(ds));
}

std::vector<LabelCounts> label_counts(const LabeledDataset& ds) {
    std::vector<LabelCounts> counts(ds.k());
    for (const auto& r : ds.records()) {
        for (std::size_t j = 0; j < ds.k(); ++j) {
            if (r.labels[j]) ++counts[j].positives;
            else ++counts[j].negatives;
        }
    }
    return counts;
}

PredictionTable parse_predictions(std::string_view csv_text) {
    const auto rows = csv::parse(csv_text);
    if (rows.empty()) throw DataError("prediction file is empty (no header)");
    const auto h = read_header(rows[0]);
    PredictionTable t{{}, EmotionSchema(h.emotions), BinaryMatrix(rows.size() - 1, h.emotions.size())};
    std::unordered_set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        check_width(row, rows[0].size(), r + 1);
        if (!seen.insert(row[*h.id]).second) throw DataError("duplicate id: '" + row[*h.id] + "'");
        t.ids.push_back(row[*h.id]);
        for (std::size_t j = 0; j < t.schema.k(); ++j) {
            t.labels(r - 1, j) = parse_label(row[h.emotion_columns[j]], r + 1, t.schema[j]);
        }
    }
    return t;
}

PredictionTable load_predictions(const std::filesystem::path& path) {
    try {
        return parse_predictions(csv::read_file(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string predictions_to_csv(const PredictionTable& table) {
    if (table.labels.rows() != table.ids.size() || table.labels.cols() != table.schema.k()) {
        throw DataError("prediction table shape does not match ids/schema");
    }
    std::vector<std::string> fields{"id"};
    fields.insert(fields.end(), table.schema.emotions().begin(), table.schema.emotions().end());
    std::string out = csv::format_row(fields);
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
        fields.assign({table.ids[i]});
        for (auto v : table.labels.row(i)) fields.push_back(v ? "1" : "0");
        out += csv::format_row(fields);
    }
    return out;
}

void write_predictions(const PredictionTable& table, const std::filesystem::path& path) {
    csv::write_file(path, predictions_to_csv(table));
}

ScoreTable::ScoreTable(std::vector<std::string> models, std::vector<std::string> languages,
                       std::vector<std::optional<double>> scores)
    : models_(std::move(models)), languages_(std::move(languages)), scores_(std::move(scores)) {
    if (scores_.size() != models_.size() * languages_.size()) {
        throw DataError("score grid dimensions do not match model/language lists");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& m : models_) {
        if (!seen.insert(m).second) throw DataError("duplicate model name: '" + m + "'");
    }
    seen.clear();
    for (const auto& l : languages_) {
        if (!seen.insert(l).second) throw DataError("duplicate language column: '" + l + "'");
    }
    for (const auto& s : scores_) {
        if (s && !(*s >= 0.0 && *s <= 100.0)) {
            throw DataError("score out of range [0, 100]: " + std::to_string(*s));
        }
    }
}

std::optional<std::size_t> ScoreTable::find_model(std::string_view name) const {
    auto it = std::find(models_.begin(), models_.end(), name);
    if (it == models_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - models_.begin());
}

std::optional<std::size_t> ScoreTable::find_language(std::string_view code) const {
    auto it = std::find(languages_.begin(), languages_.end(), code);
    if (it == languages_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - languages_.begin());
}

std::size_t ScoreTable::model_index(std::string_view name) const {
    if (auto i = find_model(name)) return *i;
    throw DataError("unknown model: '" + std::string(name) + "'");
}

ScoreTable parse_score_table(std::string_view csv_text) {
    const auto rows = csv::parse(csv_text);
    if (rows.empty()) throw DataError("score table is empty (no header)");
    const auto& header = rows[0];
    if (header.empty() || trim(header[0]) != "model") {
        throw DataError("score table header must start with 'model'");
    }
    std::vector<std::string> languages;
    std::vector<std::size_t> columns;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const std::string name(trim(header[c]));
        if (name == "average") continue;
        languages.push_back(name);
        columns.push_back(c);
    }

    std::vector<std::string> models;
    std::vector<std::optional<double>> scores;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        check_width(row, header.size(), r + 1);
        models.emplace_back(trim(row[0]));
        for (auto c : columns) {
            const auto cell = trim(row[c]);
            if (cell.empty() || cell == "-") {
                scores.emplace_back();
                continue;
            }
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                throw DataError("row " + std::to_string(r + 1) + ", column '" + header[c] +
                                "': not a number: '" + std::string(cell) + "'");
            }
            scores.emplace_back(v);
        }
    }
    return ScoreTable(std::move(models), std::move(languages), std::move(scores));
}

ScoreTable load_score_table(const std::filesystem::path& path) {
    try {
        return parse_score_table(csv::read_file(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

LabeledDataset synth_dataset(std::string language, std::size_t n, const EmotionSchema& schema,
                             double positive_rate, std::uint64_t seed) {
    if (!(positive_rate >= 0.0 && positive_rate <= 1.0)) throw ConfigError("synth: positive_rate must lie in [0, 1]");
    if (schema.k() == 0) throw ConfigError("synth: empty emotion schema");
    Rng rng(seed);
    const int width = std::max<int>(4, static_cast<int>(std::to_string(n).size()));
    std::vector<Record> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Record r;
        const auto num = std::to_string(i);
        r.id = "r" + std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(width, num.size()), '0') + num;
        r.text = "synthetic record " + num;
        r.labels.resize(schema.k());
        for (auto& v : r.labels) v = rng.uniform() < positive_rate ? 1 : 0;
        records.push_back(std::move(r));
    }
    return LabeledDataset(std::move(language), schema, std::move(records));
}

}  // namespace emolab
