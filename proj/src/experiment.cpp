#include "emolab/experiment.hpp"

#include <set>

#include "emolab/csv.hpp"
#include "emolab/embedstore.hpp"
#include "emolab/error.hpp"
#include "emolab/losses.hpp"
#include "emolab/parallel.hpp"
#include "emolab/stratify.hpp"

namespace emolab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Re-throws library errors with the config key that led to them.
template <typename Fn>
auto with_context(const std::string& key, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(key + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(key + ": " + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

std::string dataset_key(std::size_t i) { return "datasets[" + std::to_string(i) + "]"; }

fs::path resolve(const fs::path& base, const fs::path& p) { return p.is_absolute() || base.empty() ? p : base / p; }

void write_json(const fs::path& path, const json& j) { csv::write_file(path, j.dump(2) + "\n"); }

EmbeddingVariant variant_for(const ExperimentConfig& cfg) {
    return cfg.model == ModelKind::Head && cfg.head.strategy == HeadStrategy::PerEmotionEmbedding
               ? EmbeddingVariant::PerEmotion
               : EmbeddingVariant::Shared;
}

LabeledDataset load_language(const ExperimentConfig& cfg, std::size_t i) {
    const auto& spec = cfg.datasets[i];
    if (spec.path) {
        return with_context(dataset_key(i) + ".path", [&] { return load_dataset(*spec.path, spec.language); });
    }
    const auto& s = *spec.synth;
    return with_context(dataset_key(i) + ".synth", [&] {
        return synth_dataset(spec.language, s.n, EmotionSchema(s.emotions), s.positive_rate, s.seed);
    });
}

EmbeddingSet embeddings_for(const ExperimentConfig& cfg, const LabeledDataset& ds) {
    const auto variant = variant_for(cfg);
    const auto& src = cfg.embeddings;
    if (src.synthetic) {
        return with_context("embeddings", [&] { return synth_embeddings(ds, src.d, src.seed, variant, src.noise); });
    }
    const std::string key = "embeddings.paths." + ds.language();
    return with_context(key, [&] {
        auto set = read_embeddings(src.files.at(ds.language()));
        if (set.variant() != variant) {
            throw ConfigError("embedding variant " + std::string(variant_name(set.variant())) +
                              " does not suit the model (needs " + std::string(variant_name(variant)) + ")");
        }
        if (set.variant() == EmbeddingVariant::PerEmotion && set.k() != ds.k()) {
            throw DataError("per-emotion embeddings hold " + std::to_string(set.k()) + " emotions, dataset has " +
                            std::to_string(ds.k()));
        }
        const auto ids = ds.ids();
        set.align(ids);
        return set;
    });
}

struct FittedModel {
    std::optional<TrainedHead> head;
    std::optional<TreeEnsembleModel> trees;

    json to_json() const { return head ? emolab::to_json(*head) : emolab::to_json(*trees); }

    BinaryMatrix predict(const EmbeddingSet& embs, std::span<const std::string> ids) const {
        if (head) return apply_threshold(predict_proba(*head, embs, ids), head->config.threshold);
        return predict_gbdt(*trees, embs, ids).labels;
    }
};

FittedModel fit(const ExperimentConfig& cfg, const EmbeddingSet& embs, const LabeledDataset& train) {
    const auto counts = label_counts(train);
    const auto weights = cfg.class_weights ? class_weights(counts, train.size()) : ClassWeights::uniform(train.k());
    FittedModel m;
    if (cfg.model == ModelKind::Head) {
        m.head = train_head(embs, train, cfg.head, weights);
    } else {
        m.trees = train_gbdt(embs, train, cfg.gbdt, weights);
    }
    return m;
}

EvalReport evaluate_language(const FittedModel& model, const EmbeddingSet& embs, const LabeledDataset& ds,
                             const SplitResult& split, const fs::path& dir) {
    const auto val = ds.subset(split.val_indices);
    const auto ids = val.ids();
    auto pred = model.predict(embs, ids);
    auto report = f1_scores(pred, val.label_matrix(), ds.schema().emotions(), ds.language());
    write_predictions(PredictionTable{ids, ds.schema(), std::move(pred)}, dir / "predictions.csv");
    write_json(dir / "eval.json", to_json(report));
    return report;
}

// Training records of every language under "<language>:<id>" ids, with the
// matching embedding rows.
std::pair<LabeledDataset, EmbeddingSet> union_of_training(const std::vector<LabeledDataset>& datasets,
                                                         const std::vector<EmbeddingSet>& embeddings,
                                                         const std::map<std::string, SplitResult>& splits) {
    const auto& first = embeddings.front();
    const std::size_t d = first.d(), k = first.k();
    const std::size_t per_record = first.variant() == EmbeddingVariant::Shared ? 1 : k;
    std::vector<Record> records;
    std::vector<float> data;
    std::vector<std::string> ids;
    for (std::size_t l = 0; l < datasets.size(); ++l) {
        const auto& ds = datasets[l];
        const auto& embs = embeddings[l];
        if (embs.d() != d) {
            throw DataError(dataset_key(l) + ": embedding dimension " + std::to_string(embs.d()) + " differs from " +
                            std::to_string(d));
        }
        for (auto i : splits.at(ds.language()).train_indices) {
            Record r = ds[i];
            r.id = ds.language() + ":" + r.id;
            const auto row = *embs.find(ds[i].id);
            for (std::size_t q = 0; q < per_record; ++q) {
                const auto v = per_record == 1 ? embs.row(row) : embs.row(row, q);
                data.insert(data.end(), v.begin(), v.end());
            }
            ids.push_back(r.id);
            records.push_back(std::move(r));
        }
    }
    const auto n = records.size();
    LabeledDataset ds("ALL", datasets.front().schema(), std::move(records));
    EmbeddingSet set(first.variant(), n, d, k, std::move(data),
                     std::move(ids), first.meta());
    return {std::move(ds), std::move(set)};
}

}  // namespace

void ExperimentConfig::validate() const {
    if (datasets.empty()) throw ConfigError("datasets: at least one dataset is required");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        const auto& d = datasets[i];
        const auto key = dataset_key(i);
        if (d.language.empty()) throw ConfigError(key + ".language: must be non-empty");
        if (!seen.insert(d.language).second) throw ConfigError(key + ".language: duplicate language '" + d.language + "'");
        if (d.path.has_value() == d.synth.has_value()) throw ConfigError(key + ": give exactly one of 'path' or 'synth'");
        if (d.path && !fs::is_regular_file(*d.path)) {
            throw ConfigError(key + ".path: file not found: " + d.path->string());
        }
        if (!embeddings.synthetic) {
            const auto it = embeddings.files.find(d.language);
            if (it == embeddings.files.end()) {
                throw ConfigError("embeddings.paths." + d.language + ": no embedding file for this language");
            }
            if (!fs::is_regular_file(it->second)) {
                throw ConfigError("embeddings.paths." + d.language + ": file not found: " + it->second.string());
            }
        }
    }
    if (embeddings.synthetic) {
        if (embeddings.d == 0) throw ConfigError("embeddings.d: must be positive");
        if (!(embeddings.noise >= 0.0)) throw ConfigError("embeddings.noise: must be non-negative");
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("split.train_fraction: must lie in (0, 1)");
    if (model == ModelKind::Head) {
        with_context("model.head", [&] { head.validate(); });
    } else {
        with_context("model.gbdt", [&] { gbdt.validate(); });
    }
    if (output_dir.empty()) throw ConfigError("output_dir: must be non-empty");
    if (workers == 0) throw ConfigError("workers: must be at least 1");
}

ExperimentConfig experiment_config_from_json(const json& j, const fs::path& base_dir) {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    ExperimentConfig cfg;
    with_context("name", [&] { cfg.name = j.value("name", cfg.name); });
    with_context("language_mode", [&] {
        const auto mode = j.value("language_mode", std::string("LANG"));
        if (mode == "ALL") cfg.mode = LanguageMode::All;
        else if (mode == "LANG") cfg.mode = LanguageMode::Lang;
        else throw ConfigError("expected ALL or LANG, got '" + mode + "'");
    });
    with_context("output_dir", [&] { cfg.output_dir = resolve(base_dir, j.value("output_dir", std::string("out"))); });
    with_context("workers", [&] { cfg.workers = j.value("workers", cfg.workers); });
    with_context("class_weights", [&] { cfg.class_weights = j.value("class_weights", cfg.class_weights); });

    const auto& ds = j.contains("datasets") ? j["datasets"] : json::array();
    if (!ds.is_array()) throw ConfigError("datasets: expected an array");
    for (std::size_t i = 0; i < ds.size(); ++i) {
        with_context(dataset_key(i), [&] {
            const auto& e = ds[i];
            DatasetSpec spec;
            spec.language = e.at("language").get<std::string>();
            if (e.contains("path")) spec.path = resolve(base_dir, e["path"].get<std::string>());
            if (e.contains("synth")) {
                const auto& s = e["synth"];
                SynthDatasetSpec sd;
                sd.n = s.value("n", sd.n);
                sd.emotions = s.value("emotions", sd.emotions);
                sd.positive_rate = s.value("positive_rate", sd.positive_rate);
                sd.seed = s.value("seed", sd.seed);
                spec.synth = sd;
            }
            cfg.datasets.push_back(std::move(spec));
        });
    }

    if (j.contains("embeddings")) {
        with_context("embeddings", [&] {
            const auto& e = j["embeddings"];
            const auto source = e.value("source", std::string("synth"));
            if (source == "file") {
                cfg.embeddings.synthetic = false;
                for (const auto& [lang, path] : e.at("paths").items()) {
                    cfg.embeddings.files[lang] = resolve(base_dir, path.get<std::string>());
                }
            } else if (source == "synth") {
                cfg.embeddings.d = e.value("d", cfg.embeddings.d);
                cfg.embeddings.noise = e.value("noise", cfg.embeddings.noise);
                cfg.embeddings.seed = e.value("seed", cfg.embeddings.seed);
            } else {
                throw ConfigError("source must be 'file' or 'synth', got '" + source + "'");
            }
        });
    }

    if (j.contains("split")) {
        with_context("split", [&] {
            cfg.train_fraction = j["split"].value("train_fraction", cfg.train_fraction);
            cfg.split_seed = j["split"].value("seed", cfg.split_seed);
        });
    }

    const json model = j.value("model", json::object());
    with_context("model", [&] {
        const auto type = model.value("type", std::string("head"));
        if (type == "head") cfg.model = ModelKind::Head;
        else if (type == "gbdt") cfg.model = ModelKind::Gbdt;
        else throw ConfigError("type must be 'head' or 'gbdt', got '" + type + "'");
    });
    json head = model.value("head", json::object());
    if (j.contains("loss")) {
        with_context("loss", [&] {
            const auto& loss = j["loss"];
            if (loss.is_string()) {
                head["loss"] = loss;
                return;
            }
            for (const auto& [key, value] : loss.items()) head[key == "kind" ? "loss" : key] = value;
        });
    }
    with_context("model.head", [&] { cfg.head = head_config_from_json(head); });
    with_context("model.gbdt", [&] { cfg.gbdt = gbdt_config_from_json(model.value("gbdt", json::object())); });
    return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    std::vector<LabeledDataset> datasets;
    for (std::size_t i = 0; i < cfg.datasets.size(); ++i) datasets.push_back(load_language(cfg, i));
    if (cfg.mode == LanguageMode::All) {
        for (std::size_t i = 1; i < datasets.size(); ++i) {
            if (!(datasets[i].schema() == datasets[0].schema())) {
                throw ConfigError(dataset_key(i) + ": emotion columns differ from " + dataset_key(0) +
                                  "; ALL mode needs one shared schema");
            }
        }
    }
    std::vector<EmbeddingSet> embeddings;
    for (const auto& ds : datasets) embeddings.push_back(embeddings_for(cfg, ds));

    const auto splits = with_context("split", [&] {
        return split_by_language(datasets, cfg.train_fraction, cfg.split_seed);
    });

    const std::size_t langs = datasets.size();
    std::vector<EvalReport> reports(langs);
    for (const auto& ds : datasets) {
        const auto dir = cfg.output_dir / ds.language();
        fs::create_directories(dir);
        write_json(dir / "split.json", split_to_json(ds, splits.at(ds.language())));
    }

    if (cfg.mode == LanguageMode::Lang) {
        for_each_index(langs, cfg.workers, [&](std::size_t l) {
            const auto& ds = datasets[l];
            const auto& split = splits.at(ds.language());
            const auto dir = cfg.output_dir / ds.language();
            const auto model = with_context(dataset_key(l), [&] {
                return fit(cfg, embeddings[l], ds.subset(split.train_indices));
            });
            write_json(dir / "model.json", model.to_json());
            reports[l] = evaluate_language(model, embeddings[l], ds, split, dir);
        });
    } else {
        const auto joined = union_of_training(datasets, embeddings, splits);
        const auto model = with_context("datasets", [&] { return fit(cfg, joined.second, joined.first); });
        write_json(cfg.output_dir / "model.json", model.to_json());
        for (std::size_t l = 0; l < langs; ++l) {
            const auto& ds = datasets[l];
            reports[l] = evaluate_language(model, embeddings[l], ds, splits.at(ds.language()),
                                           cfg.output_dir / ds.language());
        }
    }

    ExperimentResult result;
    result.reports = reports;
    result.rendered = render_report(result.reports, cfg.name);
    json all = json::array();
    for (const auto& r : result.reports) all.push_back(to_json(r));
    write_json(cfg.output_dir / "report.json",
               {{"name", cfg.name}, {"language_mode", cfg.mode == LanguageMode::All ? "ALL" : "LANG"}, {"reports", all}});
    csv::write_file(cfg.output_dir / "report.md", result.rendered.markdown);
    csv::write_file(cfg.output_dir / "report.csv", result.rendered.csv);
    return result;
}

}  // namespace emolab
