#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "emolab/csv.hpp"
#include "emolab/dataset.hpp"
#include "emolab/embedstore.hpp"
#include "emolab/ensemble.hpp"
#include "emolab/error.hpp"
#include "emolab/experiment.hpp"
#include "emolab/gbdt.hpp"
#include "emolab/losses.hpp"
#include "emolab/metrics.hpp"
#include "emolab/prompt.hpp"
#include "emolab/report.hpp"
#include "emolab/stats.hpp"
#include "emolab/stratify.hpp"
#include "emolab/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace emolab;

namespace {

json read_json(const std::string& path) {
    const auto text = csv::read_file(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": invalid JSON: " + e.what());
    }
}

// Writes to `path`, or to stdout when it is empty or "-".
void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
    } else {
        csv::write_file(path, content);
    }
}

std::string language_for(const std::string& language, const std::string& data_path) {
    return language.empty() ? fs::path(data_path).stem().string() : language;
}

// Fills options missing from the command line with keys from the JSON file
// given by --config. Keys are option names with '_' or '-'; a section named
// after the subcommand takes precedence over top-level keys.
std::vector<std::string> with_config_defaults(std::vector<std::string> args) {
    if (args.size() < 2 || args[1] == "run") return args;
    std::string config_path;
    for (std::size_t i = 2; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;
    json cfg = read_json(config_path);
    if (!cfg.is_object()) throw ConfigError(config_path + ": config must be a JSON object");
    if (cfg.contains(args[1]) && cfg[args[1]].is_object()) cfg = cfg[args[1]];

    const auto given = [&](const std::string& flag) {
        return std::any_of(args.begin() + 2, args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    std::vector<std::string> extra;
    for (const auto& [key, value] : cfg.items()) {
        if (value.is_object()) continue;
        std::string flag = "--" + key;
        std::replace(flag.begin() + 2, flag.end(), '_', '-');
        if (flag == "--config" || given(flag)) continue;
        const auto text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        if (value.is_array()) {
            for (const auto& v : value) extra.push_back(flag + "=" + text(v));
        } else {
            extra.push_back(flag + "=" + text(value));
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

std::vector<std::size_t> indices_of(const LabeledDataset& ds, const std::vector<std::string>& ids) {
    std::vector<std::size_t> out;
    for (const auto& id : ids) {
        const auto i = ds.find(id);
        if (!i) throw DataError("split id '" + id + "' is not in the dataset");
        out.push_back(*i);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> split_ids(const std::string& path, const std::string& part) {
    const auto j = read_json(path);
    const auto key = part + "_ids";
    if (!j.contains(key)) throw DataError(path + ": missing '" + key + "'");
    return j[key].get<std::vector<std::string>>();
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Multilabel emotion detection toolkit over frozen sentence embeddings"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    std::string config;
    const auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON file supplying defaults for options not given");
    };

    // split
    auto* split = app.add_subcommand("split", "Stratified train/validation split of one dataset");
    std::string split_data, split_lang, split_out;
    double split_fraction = 0.8;
    std::uint64_t split_seed = 42;
    add_config(split);
    split->add_option("--data", split_data, "Dataset CSV")->required();
    split->add_option("--language", split_lang, "Language code (default: file stem)");
    split->add_option("--fraction", split_fraction, "Training fraction");
    split->add_option("--seed", split_seed, "Base seed; the language hash is added");
    split->add_option("--out", split_out, "Output JSON (default stdout)");

    // weights
    auto* weights = app.add_subcommand("weights", "Per-emotion class weights");
    std::string w_data, w_lang, w_out, w_split;
    add_config(weights);
    weights->add_option("--data", w_data, "Dataset CSV")->required();
    weights->add_option("--language", w_lang, "Language code");
    weights->add_option("--split", w_split, "Split JSON; weights from its training ids");
    weights->add_option("--out", w_out, "Output JSON (default stdout)");

    // prompt
    auto* prompt = app.add_subcommand("prompt", "Render encoder prompts");
    std::string p_template, p_text, p_data, p_emotion, p_out;
    std::vector<std::string> p_emotions;
    add_config(prompt);
    prompt->add_option("--template", p_template, "ME5, BGEV1 or BGEV2")->required();
    prompt->add_option("--emotions", p_emotions, "Emotion list (default: dataset header)")->delimiter(',');
    prompt->add_option("--emotion", p_emotion, "Queried emotion (BGEV2)");
    prompt->add_option("--text", p_text, "Single text to render");
    prompt->add_option("--data", p_data, "Dataset CSV; renders every record as JSON");
    prompt->add_option("--out", p_out, "Output file (default stdout)");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset and/or embeddings");
    std::string s_lang = "syn", s_data, s_data_out, s_embs_out, s_variant = "shared";
    std::vector<std::string> s_emotions{"joy", "sadness", "anger", "surprise", "disgust"};
    std::size_t s_n = 200, s_d = 16;
    double s_rate = 0.3, s_noise = 0.05;
    std::uint64_t s_seed = 42;
    add_config(synth);
    synth->add_option("--language", s_lang, "Language code");
    synth->add_option("--n", s_n, "Record count");
    synth->add_option("--emotions", s_emotions, "Emotion columns")->delimiter(',');
    synth->add_option("--positive-rate", s_rate, "Per-emotion positive probability");
    synth->add_option("--data", s_data, "Existing dataset to embed instead of generating one");
    synth->add_option("--d", s_d, "Embedding dimension");
    synth->add_option("--noise", s_noise, "Noise standard deviation");
    synth->add_option("--variant", s_variant, "shared or per_emotion");
    synth->add_option("--seed", s_seed, "Seed for labels and embeddings");
    synth->add_option("--data-out", s_data_out, "Dataset CSV to write");
    synth->add_option("--embs-out", s_embs_out, "EMBS file to write");

    // train
    auto* train = app.add_subcommand("train", "Train a linear head or GBDT on frozen embeddings");
    std::string t_data, t_lang, t_embs, t_split, t_out, t_type = "head", t_strategy, t_loss;
    double t_focal_gamma = 0, t_gamma_pos = 0, t_gamma_neg = 0, t_margin = 0, t_lr = 0, t_warmup = 0, t_threshold = 0;
    std::size_t t_epochs = 0, t_batch = 0, t_trees = 0, t_depth = 0, t_min_leaf = 0;
    std::uint64_t t_seed = 42;
    unsigned t_workers = 1;
    bool t_class_weights = true;
    add_config(train);
    train->add_option("--data", t_data, "Dataset CSV")->required();
    train->add_option("--language", t_lang, "Language code");
    train->add_option("--embeddings", t_embs, "EMBS file")->required();
    train->add_option("--split", t_split, "Split JSON; trains on its training ids");
    train->add_option("--out", t_out, "Model JSON")->required();
    train->add_option("--model-type", t_type, "head or gbdt");
    train->add_option("--strategy", t_strategy, "MO, BR or PER_EMOTION_EMB");
    train->add_option("--loss", t_loss, "weighted_bce, focal or asymmetric");
    train->add_option("--focal-gamma", t_focal_gamma);
    train->add_option("--gamma-pos", t_gamma_pos);
    train->add_option("--gamma-neg", t_gamma_neg);
    train->add_option("--margin", t_margin);
    train->add_option("--learning-rate", t_lr);
    train->add_option("--epochs", t_epochs);
    train->add_option("--batch-size", t_batch);
    train->add_option("--warmup-fraction", t_warmup);
    train->add_option("--threshold", t_threshold);
    train->add_option("--n-trees", t_trees);
    train->add_option("--max-depth", t_depth);
    train->add_option("--min-samples-leaf", t_min_leaf);
    train->add_option("--seed", t_seed);
    train->add_option("--workers", t_workers, "Threads for per-emotion training");
    train->add_flag("--class-weights,!--no-class-weights", t_class_weights, "Use inverse-frequency class weights");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Predict labels with a trained model");
    std::string pr_model, pr_embs, pr_split, pr_part = "val", pr_data, pr_out;
    double pr_threshold = 0.5;
    add_config(predict_cmd);
    predict_cmd->add_option("--model", pr_model, "Model JSON")->required();
    predict_cmd->add_option("--embeddings", pr_embs, "EMBS file")->required();
    predict_cmd->add_option("--split", pr_split, "Split JSON selecting the ids");
    predict_cmd->add_option("--part", pr_part, "Split part: train or val")->check(CLI::IsMember({"train", "val"}));
    predict_cmd->add_option("--data", pr_data, "Dataset CSV selecting the ids");
    predict_cmd->add_option("--threshold", pr_threshold, "Decision threshold (default: the model's)");
    predict_cmd->add_option("--out", pr_out, "Prediction CSV (default stdout)");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Per-emotion and macro F1 of a prediction file");
    std::string ev_pred, ev_gold, ev_lang, ev_out;
    add_config(evaluate);
    evaluate->add_option("--pred", ev_pred, "Prediction CSV")->required();
    evaluate->add_option("--gold", ev_gold, "Gold dataset CSV")->required();
    evaluate->add_option("--language", ev_lang, "Language code");
    evaluate->add_option("--out", ev_out, "Report JSON");

    // ensemble
    auto* ensemble = app.add_subcommand("ensemble", "Weighted vote over member prediction files");
    std::vector<std::string> en_members, en_models;
    std::vector<double> en_weights;
    std::string en_scores, en_lang, en_out;
    add_config(ensemble);
    ensemble->add_option("--member", en_members, "Member prediction CSV (repeatable)")->required();
    ensemble->add_option("--model", en_models, "Score-table model name of each member (repeatable)");
    ensemble->add_option("--scores", en_scores, "Dev score table CSV supplying the weights");
    ensemble->add_option("--language", en_lang, "Weight by this language's column instead of the average");
    ensemble->add_option("--weights", en_weights, "Explicit member weights")->delimiter(',');
    ensemble->add_option("--out", en_out, "Prediction CSV (default stdout)");

    // stats
    auto* stats = app.add_subcommand("stats", "Significance tests over a score table");
    std::string st_scores, st_spec, st_out;
    bool st_pairs = false;
    add_config(stats);
    stats->add_option("--scores", st_scores, "Score table CSV")->required();
    stats->add_option("--spec", st_spec, "Comparison spec JSON")->required();
    stats->add_flag("--pairs", st_pairs, "List the compared models and their averages");
    stats->add_option("--out", st_out, "Result JSON");

    // report
    auto* report = app.add_subcommand("report", "Render a score table or experiment reports");
    std::string rp_scores, rp_reports, rp_md, rp_csv;
    add_config(report);
    report->add_option("--scores", rp_scores, "Score table CSV");
    report->add_option("--reports", rp_reports, "report.json written by run");
    report->add_option("--md", rp_md, "Markdown output (default stdout)");
    report->add_option("--csv", rp_csv, "CSV output");

    // run
    auto* run = app.add_subcommand("run", "Run a full experiment from a JSON config");
    std::string r_config, r_out_dir, r_mode, r_name;
    unsigned r_workers = 1;
    run->add_option("--config", r_config, "Experiment config JSON")->required();
    run->add_option("--output-dir", r_out_dir, "Override output_dir");
    run->add_option("--language-mode", r_mode, "Override language_mode")->check(CLI::IsMember({"ALL", "LANG"}));
    run->add_option("--workers", r_workers, "Override workers");
    run->add_option("--name", r_name, "Override name");

    try {
        std::vector<std::string> raw(argv, argv + argc);
        auto args = with_config_defaults(raw);
        std::vector<char*> ptrs;
        for (auto& a : args) ptrs.push_back(a.data());
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*split) {
        auto ds = load_dataset(split_data, language_for(split_lang, split_data));
        const std::vector<LabeledDataset> one{ds};
        const auto result = split_by_language(one, split_fraction, split_seed);
        emit(split_out, split_to_json(ds, result.begin()->second).dump(2) + "\n");
    } else if (*weights) {
        auto ds = load_dataset(w_data, language_for(w_lang, w_data));
        if (!w_split.empty()) ds = ds.subset(indices_of(ds, split_ids(w_split, "train")));
        const auto counts = label_counts(ds);
        const auto cw = class_weights(counts, ds.size());
        json out = {{"language", ds.language()}, {"n", ds.size()}, {"emotions", json::array()}};
        for (std::size_t j = 0; j < ds.k(); ++j) {
            out["emotions"].push_back({{"emotion", ds.schema()[j]},
                                       {"positives", counts[j].positives},
                                       {"negatives", counts[j].negatives},
                                       {"positive_weight", cw.positive[j]},
                                       {"negative_weight", cw.negative[j]}});
        }
        emit(w_out, out.dump(2) + "\n");
    } else if (*prompt) {
        const auto tmpl = parse_template(p_template);
        std::optional<LabeledDataset> ds;
        if (!p_data.empty()) ds = load_dataset(p_data, language_for("", p_data));
        auto emotions = p_emotions;
        if (emotions.empty() && ds) emotions = ds->schema().emotions();
        if (emotions.empty()) throw ConfigError("prompt: give --emotions or --data");
        if (ds) {
            json out = json::array();
            for (const auto& r : ds->records()) {
                if (requires_emotion(tmpl)) {
                    for (const auto& e : emotions) {
                        out.push_back({{"id", r.id}, {"emotion", e}, {"prompt", render_prompt(tmpl, r.text, e, emotions)}});
                    }
                } else {
                    out.push_back({{"id", r.id}, {"prompt", render_prompt(tmpl, r.text, std::nullopt, emotions)}});
                }
            }
            emit(p_out, out.dump(2) + "\n");
        } else {
            std::optional<std::string_view> emotion;
            if (!p_emotion.empty()) emotion = p_emotion;
            emit(p_out, render_prompt(tmpl, p_text, emotion, emotions) + "\n");
        }
    } else if (*synth) {
        if (s_data_out.empty() && s_embs_out.empty()) throw ConfigError("synth: give --data-out and/or --embs-out");
        const auto ds = s_data.empty() ? synth_dataset(s_lang, s_n, EmotionSchema(s_emotions), s_rate, s_seed)
                                       : load_dataset(s_data, language_for(s_lang, s_data));
        if (!s_data_out.empty()) write_dataset(ds, s_data_out);
        if (!s_embs_out.empty()) {
            write_embeddings(synth_embeddings(ds, s_d, s_seed, parse_variant(s_variant), s_noise), s_embs_out);
        }
    } else if (*train) {
        auto ds = load_dataset(t_data, language_for(t_lang, t_data));
        if (!t_split.empty()) ds = ds.subset(indices_of(ds, split_ids(t_split, "train")));
        const auto embs = read_embeddings(t_embs);
        const auto counts = label_counts(ds);
        const auto cw = t_class_weights ? class_weights(counts, ds.size()) : ClassWeights::uniform(ds.k());
        json params = json::object();
        const auto put = [&](const char* flag, const char* key, const auto& value) {
            if (train->count(flag) > 0) params[key] = value;
        };
        put("--seed", "seed", t_seed);
        put("--learning-rate", "learning_rate", t_lr);
        put("--workers", "workers", t_workers);
        json model_json;
        if (t_type == "head") {
            put("--strategy", "strategy", t_strategy);
            put("--loss", "loss", t_loss);
            put("--focal-gamma", "focal_gamma", t_focal_gamma);
            put("--gamma-pos", "gamma_pos", t_gamma_pos);
            put("--gamma-neg", "gamma_neg", t_gamma_neg);
            put("--margin", "margin", t_margin);
            put("--epochs", "epochs", t_epochs);
            put("--batch-size", "batch_size", t_batch);
            put("--warmup-fraction", "warmup_fraction", t_warmup);
            put("--threshold", "threshold", t_threshold);
            model_json = to_json(train_head(embs, ds, head_config_from_json(params), cw));
        } else if (t_type == "gbdt") {
            put("--n-trees", "n_trees", t_trees);
            put("--max-depth", "max_depth", t_depth);
            put("--min-samples-leaf", "min_samples_leaf", t_min_leaf);
            params["use_class_weights"] = t_class_weights;
            model_json = to_json(train_gbdt(embs, ds, gbdt_config_from_json(params), cw));
        } else {
            throw ConfigError("--model-type must be 'head' or 'gbdt'");
        }
        csv::write_file(t_out, model_json.dump(2) + "\n");
    } else if (*predict_cmd) {
        const auto model = read_json(pr_model);
        const auto embs = read_embeddings(pr_embs);
        std::vector<std::string> ids;
        if (!pr_split.empty()) ids = split_ids(pr_split, pr_part);
        else if (!pr_data.empty()) ids = load_dataset(pr_data, language_for("", pr_data)).ids();
        else ids = embs.ids();
        PredictionTable table;
        table.ids = ids;
        if (model.value("kind", std::string{}) == "gbdt") {
            const auto m = gbdt_from_json(model);
            table.schema = m.schema;
            table.labels = predict_gbdt(m, embs, ids, pr_threshold).labels;
        } else {
            const auto h = head_from_json(model);
            table.schema = h.schema;
            const double threshold = predict_cmd->count("--threshold") ? pr_threshold : h.config.threshold;
            table.labels = apply_threshold(predict_proba(h, embs, ids), threshold);
        }
        emit(pr_out, predictions_to_csv(table));
    } else if (*evaluate) {
        const auto pred = load_predictions(ev_pred);
        const auto gold = load_dataset(ev_gold, language_for(ev_lang, ev_gold));
        if (!(pred.schema == gold.schema())) throw DataError("prediction and gold emotion columns differ");
        std::vector<std::size_t> order;
        for (const auto& id : pred.ids) {
            const auto i = gold.find(id);
            if (!i) throw DataError("prediction id '" + id + "' is not in the gold dataset");
            order.push_back(*i);
        }
        const auto aligned = gold.subset(order);
        const auto r = f1_scores(pred.labels, aligned.label_matrix(), gold.schema().emotions(), gold.language());
        if (!ev_out.empty()) csv::write_file(ev_out, to_json(r).dump(2) + "\n");
        std::string text;
        for (const auto& e : r.per_emotion) text += e.emotion + "\t" + fixed(100.0 * e.f1, 2) + "\n";
        text += "macro\t" + fixed(100.0 * r.macro_f1, 2) + "\n" + markdown_row(r) + "\n";
        std::cout << text;
    } else if (*ensemble) {
        std::vector<PredictionTable> tables;
        for (const auto& m : en_members) tables.push_back(load_predictions(m));
        const auto& first = tables.front();
        EnsembleSpec spec;
        std::vector<double> w(tables.size(), 1.0);
        spec.weight_source = "uniform";
        if (!en_weights.empty()) {
            if (en_weights.size() != tables.size()) throw ConfigError("--weights needs one value per member");
            w = en_weights;
            spec.weight_source = "explicit";
        } else if (!en_scores.empty()) {
            if (en_models.size() != tables.size()) throw ConfigError("--model needs one name per member");
            const auto table = load_score_table(en_scores);
            std::optional<std::string_view> lang;
            if (!en_lang.empty()) lang = en_lang;
            w = dev_weights(table, en_models, lang);
            spec.weight_source = en_lang.empty() ? "dev average" : "dev " + en_lang;
        }
        for (std::size_t m = 0; m < tables.size(); ++m) {
            const auto& t = tables[m];
            if (!(t.schema == first.schema)) throw DataError(en_members[m] + ": emotion columns differ from the first member");
            if (t.ids == first.ids) {
                spec.members.push_back({t.labels, w[m]});
                continue;
            }
            std::unordered_map<std::string, std::size_t> index;
            for (std::size_t i = 0; i < t.ids.size(); ++i) index.emplace(t.ids[i], i);
            BinaryMatrix aligned(first.ids.size(), first.schema.k());
            for (std::size_t i = 0; i < first.ids.size(); ++i) {
                const auto it = index.find(first.ids[i]);
                if (it == index.end()) throw DataError(en_members[m] + ": missing id '" + first.ids[i] + "'");
                std::copy(t.labels.row(it->second).begin(), t.labels.row(it->second).end(), aligned.row(i).begin());
            }
            spec.members.push_back({std::move(aligned), w[m]});
        }
        emit(en_out, predictions_to_csv(PredictionTable{first.ids, first.schema, weighted_vote(spec)}));
    } else if (*stats) {
        const auto table = load_score_table(st_scores);
        const auto specs = comparisons_from_json(read_json(st_spec));
        std::string text = "| comparison | test | statistic | p | n | method |\n|---|---|---:|---:|---:|---|\n";
        json out = json::array();
        std::string details;
        for (const auto& s : specs) {
            const auto r = compare_models(table, s);
            text += narrative_row(r) + "\n";
            json entry = {{"name", r.name},
                          {"test", r.test},
                          {"statistic", r.result.statistic},
                          {"p_value", r.result.p_value},
                          {"n", r.result.n_effective},
                          {"method", method_name(r.result.method)},
                          {"degenerate", r.result.degenerate}};
            if (r.rank_sum_a) entry["rank_sum_a"] = *r.rank_sum_a;
            if (!r.pairs.empty()) {
                entry["pairs"] = r.pairs;
                details += r.name + ":\n";
                for (std::size_t i = 0; i < r.pairs.size(); ++i) {
                    details += "  " + r.pairs[i].first + " (" + fixed(r.scores_a[i], 3) + ") vs " + r.pairs[i].second +
                               " (" + fixed(r.scores_b[i], 3) + ")\n";
                }
            } else {
                entry["group_a"] = r.group_a;
                entry["group_b"] = r.group_b;
                details += r.name + ":\n  group A:";
                for (const auto& m : r.group_a) details += " " + m;
                details += "\n  group B:";
                for (const auto& m : r.group_b) details += " " + m;
                details += "\n";
            }
            out.push_back(entry);
        }
        if (st_pairs) text += "\n" + details;
        std::cout << text;
        if (!st_out.empty()) csv::write_file(st_out, out.dump(2) + "\n");
    } else if (*report) {
        if (rp_scores.empty() == rp_reports.empty()) throw ConfigError("report: give exactly one of --scores or --reports");
        RenderedReport rendered;
        if (!rp_scores.empty()) {
            rendered = render_report(load_score_table(rp_scores));
        } else {
            const auto j = read_json(rp_reports);
            std::vector<EvalReport> reports;
            try {
                for (const auto& r : j.at("reports")) reports.push_back(report_from_json(r));
            } catch (const json::exception& e) {
                throw DataError(rp_reports + ": " + e.what());
            }
            rendered = render_report(reports, j.value("name", std::string("model")));
        }
        emit(rp_md, rendered.markdown);
        if (!rp_csv.empty()) csv::write_file(rp_csv, rendered.csv);
    } else if (*run) {
        auto j = read_json(r_config);
        if (!j.is_object()) throw ConfigError(r_config + ": config must be a JSON object");
        if (!r_out_dir.empty()) j["output_dir"] = fs::absolute(r_out_dir).string();
        if (!r_mode.empty()) j["language_mode"] = r_mode;
        if (run->count("--workers")) j["workers"] = r_workers;
        if (!r_name.empty()) j["name"] = r_name;
        const auto cfg = experiment_config_from_json(j, fs::path(r_config).parent_path());
        const auto result = run_experiment(cfg);
        std::cout << result.rendered.markdown;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
