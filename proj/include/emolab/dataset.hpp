#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emolab/matrix.hpp"

namespace emolab {

// Ordered emotion inventory, taken from a data header. Names are non-empty,
// unique and lowercase.
class EmotionSchema {
public:
    EmotionSchema() = default;
    explicit EmotionSchema(std::vector<std::string> emotions);

    const std::vector<std::string>& emotions() const noexcept { return emotions_; }
    std::size_t k() const noexcept { return emotions_.size(); }
    const std::string& operator[](std::size_t i) const { return emotions_[i]; }
    std::optional<std::size_t> index_of(std::string_view name) const;

    bool operator==(const EmotionSchema& o) const { return emotions_ == o.emotions_; }

private:
    std::vector<std::string> emotions_;
};

struct Record {
    std::string id;
    std::string text;
    std::vector<std::uint8_t> labels;

    bool operator==(const Record&) const = default;
};

// Immutable after construction. Record ids are unique and every label vector
// has exactly k entries in {0, 1}.
class LabeledDataset {
public:
    LabeledDataset(std::string language, EmotionSchema schema, std::vector<Record> records);

    const std::string& language() const noexcept { return language_; }
    const EmotionSchema& schema() const noexcept { return schema_; }
    const std::vector<Record>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    std::size_t k() const noexcept { return schema_.k(); }
    const Record& operator[](std::size_t i) const { return records_[i]; }

    std::optional<std::size_t> find(std::string_view id) const;
    std::vector<std::string> ids() const;
    BinaryMatrix label_matrix() const;

    // New dataset holding the given records, in the given order.
    LabeledDataset subset(std::span<const std::size_t> indices) const;

    bool operator==(const LabeledDataset& o) const {
        return language_ == o.language_ && schema_ == o.schema_ && records_ == o.records_;
    }

private:
    std::string language_;
    EmotionSchema schema_;
    std::vector<Record> records_;
    std::unordered_map<std::string, std::size_t> index_;
};

// CSV layout: header `id,text,<emotion_1>,...,<emotion_k>`.
LabeledDataset parse_dataset(std::string_view csv_text, std::string language);
LabeledDataset load_dataset(const std::filesystem::path& path, std::string language);
std::string dataset_to_csv(const LabeledDataset& ds);
void write_dataset(const LabeledDataset& ds, const std::filesystem::path& path);

struct LabelCounts {
    std::size_t positives = 0;
    std::size_t negatives = 0;
    bool operator==(const LabelCounts&) const = default;
};

std::vector<LabelCounts> label_counts(const LabeledDataset& ds);

// Random multilabel records with ids r0000, r0001, ...; each emotion is
// positive independently with probability `positive_rate`. Pure in its inputs.
LabeledDataset synth_dataset(std::string language, std::size_t n, const EmotionSchema& schema,
                             double positive_rate, std::uint64_t seed);

// Prediction files mirror the dataset layout without the text column:
// header `id,<emotion_1>,...,<emotion_k>`. A `text` column, if present, is ignored.
struct PredictionTable {
    std::vector<std::string> ids;
    EmotionSchema schema;
    BinaryMatrix labels;
};

PredictionTable parse_predictions(std::string_view csv_text);
PredictionTable load_predictions(const std::filesystem::path& path);
std::string predictions_to_csv(const PredictionTable& table);
void write_predictions(const PredictionTable& table, const std::filesystem::path& path);

// Model x language grid of F1-macro percentages; missing entries allowed.
class ScoreTable {
public:
    ScoreTable(std::vector<std::string> models, std::vector<std::string> languages,
               std::vector<std::optional<double>> scores);

    const std::vector<std::string>& models() const noexcept { return models_; }
    const std::vector<std::string>& languages() const noexcept { return languages_; }
    std::optional<double> score(std::size_t model, std::size_t language) const {
        return scores_[model * languages_.size() + language];
    }
    std::optional<std::size_t> find_model(std::string_view name) const;
    std::optional<std::size_t> find_language(std::string_view code) const;
    // Throws DataError naming the unknown model.
    std::size_t model_index(std::string_view name) const;

    bool operator==(const ScoreTable&) const = default;

private:
    std::vector<std::string> models_;
    std::vector<std::string> languages_;
    std::vector<std::optional<double>> scores_;
};

// Header `model,<lang_1>,...`; `-` or an empty cell is a missing score.
// A column named `average` is treated as derived and skipped.
ScoreTable parse_score_table(std::string_view csv_text);
ScoreTable load_score_table(const std::filesystem::path& path);

}  // namespace emolab
