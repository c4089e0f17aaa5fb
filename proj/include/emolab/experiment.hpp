#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "emolab/gbdt.hpp"
#include "emolab/metrics.hpp"
#include "emolab/report.hpp"
#include "emolab/trainer.hpp"

namespace emolab {

enum class LanguageMode { All, Lang };
enum class ModelKind { Head, Gbdt };

struct SynthDatasetSpec {
    std::size_t n = 200;
    std::vector<std::string> emotions{"joy", "sadness", "anger", "surprise", "disgust"};
    double positive_rate = 0.3;
    std::uint64_t seed = 42;
};

// A language's data: a CSV path or generation parameters.
struct DatasetSpec {
    std::string language;
    std::optional<std::filesystem::path> path;
    std::optional<SynthDatasetSpec> synth;
};

struct EmbeddingSource {
    // file: one EMBS file per language; synth: synth_embeddings with the
    // variant the model needs.
    bool synthetic = true;
    std::map<std::string, std::filesystem::path> files;
    std::size_t d = 16;
    double noise = 0.05;
    std::uint64_t seed = 42;
};

struct ExperimentConfig {
    std::string name = "model";
    std::vector<DatasetSpec> datasets;
    EmbeddingSource embeddings;
    double train_fraction = 0.8;
    std::uint64_t split_seed = 42;
    ModelKind model = ModelKind::Head;
    HeadConfig head;
    GbdtConfig gbdt;
    LanguageMode mode = LanguageMode::Lang;
    bool class_weights = true;
    std::filesystem::path output_dir = "out";
    unsigned workers = 1;  // concurrent LANG jobs

    // Static checks plus existence of every referenced file; ConfigError
    // messages start with the offending config key.
    void validate() const;
};

// Relative paths are resolved against `base_dir`. Keys:
//   name, language_mode (ALL|LANG), output_dir, workers, class_weights,
//   datasets: [{language, path} | {language, synth: {n, emotions, positive_rate, seed}}],
//   embeddings: {source: file, paths: {lang: path}} | {source: synth, d, noise, seed},
//   split: {train_fraction, seed},
//   model: {type: head, head: {...}} | {type: gbdt, gbdt: {...}},
//   loss: {kind, focal_gamma, gamma_pos, gamma_neg, margin}  (head models)
ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::filesystem::path& base_dir = {});

struct ExperimentResult {
    std::vector<EvalReport> reports;  // one per language, in config order
    RenderedReport rendered;
};

// split -> class weights -> train -> predict -> evaluate. LANG trains one
// model per language; ALL trains one model on the union of the training
// splits (ids qualified as "<language>:<id>") and evaluates per language.
// Writes under output_dir:
//   <lang>/split.json, <lang>/predictions.csv, <lang>/eval.json,
//   <lang>/model.json (LANG) or model.json (ALL),
//   report.json, report.md, report.csv.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace emolab
