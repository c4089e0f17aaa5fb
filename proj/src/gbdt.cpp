#include "emolab/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "emolab/error.hpp"
#include "emolab/parallel.hpp"
#include "emolab/trainer.hpp"

namespace emolab {

void GbdtConfig::validate() const {
    if (max_depth < 1) throw ConfigError("gbdt: max_depth must be >= 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("gbdt: learning_rate must be positive");
    if (min_samples_leaf < 1) throw ConfigError("gbdt: min_samples_leaf must be >= 1");
}

nlohmann::json to_json(const GbdtConfig& cfg) {
    return {
        {"n_trees", cfg.n_trees},
        {"max_depth", cfg.max_depth},
        {"learning_rate", cfg.learning_rate},
        {"min_samples_leaf", cfg.min_samples_leaf},
        {"seed", cfg.seed},
        {"use_class_weights", cfg.use_class_weights},
    };
}

GbdtConfig gbdt_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("gbdt config must be a JSON object");
    GbdtConfig cfg;
    try {
        cfg.n_trees = j.value("n_trees", cfg.n_trees);
        cfg.max_depth = j.value("max_depth", cfg.max_depth);
        cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
        cfg.min_samples_leaf = j.value("min_samples_leaf", cfg.min_samples_leaf);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.use_class_weights = j.value("use_class_weights", cfg.use_class_weights);
        cfg.workers = j.value("workers", cfg.workers);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("gbdt config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

double RegressionTree::predict(std::span<const float> x) const {
    if (nodes.empty()) return 0.0;
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const auto& n = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[i].value;
}

std::size_t RegressionTree::depth() const {
    if (nodes.empty()) return 0;
    std::size_t best = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [i, depth] = stack.back();
        stack.pop_back();
        best = std::max(best, depth);
        if (!nodes[i].is_leaf()) {
            stack.emplace_back(static_cast<std::size_t>(nodes[i].left), depth + 1);
            stack.emplace_back(static_cast<std::size_t>(nodes[i].right), depth + 1);
        }
    }
    return best;
}

double TreeEnsembleModel::raw_score(std::size_t emotion, std::span<const float> x) const {
    double sum = 0.0;
    for (const auto& t : trees[emotion]) sum += t.predict(x);
    return base_scores[emotion] + learning_rate * sum;
}

namespace {

constexpr double kMinGain = 1e-12;

struct FitData {
    const EmbeddingSet& embs;
    std::span<const std::size_t> rows;  // training record -> embedding row
    std::span<const double> residual;   // y - p
    std::span<const double> hessian;    // p (1 - p)
    std::span<const double> weight;
    std::size_t min_leaf;
    std::size_t max_depth;

    float feature(std::size_t r, std::size_t f) const { return embs.row(rows[r])[f]; }
};

double leaf_value(const FitData& fd, std::span<const std::size_t> idx) {
    double num = 0.0, den = 0.0;
    for (auto r : idx) {
        num += fd.weight[r] * fd.residual[r];
        den += fd.weight[r] * fd.hessian[r];
    }
    if (!(den > 1e-300)) return 0.0;
    return std::clamp(num / den, -kLeafClamp, kLeafClamp);
}

int grow(RegressionTree& tree, const FitData& fd, std::vector<std::size_t> idx, std::size_t depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    struct Best {
        double gain = kMinGain;
        int feature = -1;
        double threshold = 0.0;
        std::size_t left_count = 0;
    } best;

    if (depth < fd.max_depth && idx.size() >= 2 * fd.min_leaf) {
        double s_total = 0.0, w_total = 0.0;
        for (auto r : idx) {
            s_total += fd.weight[r] * fd.residual[r];
            w_total += fd.weight[r];
        }
        const double base = s_total * s_total / w_total;
        std::vector<std::size_t> sorted = idx;
        for (std::size_t f = 0; f < fd.embs.d(); ++f) {
            std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return fd.feature(a, f) < fd.feature(b, f);
            });
            double s_left = 0.0, w_left = 0.0;
            for (std::size_t p = 0; p + 1 < sorted.size(); ++p) {
                const auto r = sorted[p];
                s_left += fd.weight[r] * fd.residual[r];
                w_left += fd.weight[r];
                const float here = fd.feature(r, f);
                const float next = fd.feature(sorted[p + 1], f);
                if (!(here < next)) continue;
                const std::size_t left_count = p + 1;
                if (left_count < fd.min_leaf || sorted.size() - left_count < fd.min_leaf) continue;
                const double s_right = s_total - s_left;
                const double w_right = w_total - w_left;
                if (w_left <= 0.0 || w_right <= 0.0) continue;
                const double gain = s_left * s_left / w_left + s_right * s_right / w_right - base;
                if (gain > best.gain) {
                    best.gain = gain;
                    best.feature = static_cast<int>(f);
                    best.threshold = 0.5 * (static_cast<double>(here) + static_cast<double>(next));
                    best.left_count = left_count;
                }
            }
        }
    }

    if (best.feature < 0) {
        tree.nodes[static_cast<std::size_t>(id)].value = leaf_value(fd, idx);
        return id;
    }

    std::vector<std::size_t> left, right;
    left.reserve(best.left_count);
    right.reserve(idx.size() - best.left_count);
    for (auto r : idx) {
        (fd.feature(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(r);
    }
    const int l = grow(tree, fd, std::move(left), depth + 1);
    const int rgt = grow(tree, fd, std::move(right), depth + 1);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = rgt;
    return id;
}

double weighted_logloss(std::span<const double> score, std::span<const std::uint8_t> y,
                        std::span<const double> w) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < score.size(); ++i) {
        const double z = score[i];
        // log(1 + e^z) - y z, computed stably.
        const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        num += w[i] * (softplus - (y[i] ? z : 0.0));
        den += w[i];
    }
    return den > 0.0 ? num / den : 0.0;
}

void boost_emotion(TreeEnsembleModel& model, std::size_t j, const EmbeddingSet& embs,
                   std::span<const std::size_t> rows, const LabeledDataset& ds, const GbdtConfig& cfg,
                   const ClassWeights& cw) {
    const std::size_t n = ds.size();
    std::vector<std::uint8_t> y(n);
    std::vector<double> w(n);
    double pos = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = ds[i].labels[j];
        w[i] = cfg.use_class_weights ? cw.for_label(j, y[i] != 0) : 1.0;
        pos += y[i] ? w[i] : 0.0;
        total += w[i];
    }
    const double prior = pos / total;
    const bool single_class = pos == 0.0 || pos == total;
    const double clamped = clamp_probability(prior);
    model.base_scores[j] = single_class ? std::log(clamped / (1.0 - clamped)) : std::log(pos / (total - pos));

    std::vector<double> score(n, model.base_scores[j]);
    std::vector<double> residual(n), hessian(n);
    auto& losses = model.round_loss[j];
    losses.push_back(weighted_logloss(score, y, w));
    if (single_class) return;

    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    FitData fd{embs, rows, residual, hessian, w, cfg.min_samples_leaf, cfg.max_depth};
    for (std::size_t t = 0; t < cfg.n_trees; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(score[i]);
            residual[i] = (y[i] ? 1.0 : 0.0) - p;
            hessian[i] = p * (1.0 - p);
        }
        RegressionTree tree;
        grow(tree, fd, all, 0);
        for (std::size_t i = 0; i < n; ++i) score[i] += cfg.learning_rate * tree.predict(embs.row(rows[i]));
        model.trees[j].push_back(std::move(tree));
        losses.push_back(weighted_logloss(score, y, w));
        if (!std::isfinite(losses.back())) throw NumericError("gbdt: non-finite training loss");
    }
}

}  // namespace

TreeEnsembleModel train_gbdt(const EmbeddingSet& embs, const LabeledDataset& ds, const GbdtConfig& cfg,
                             const ClassWeights& cw) {
    cfg.validate();
    if (ds.size() == 0) throw DataError("gbdt: empty training set");
    if (embs.variant() != EmbeddingVariant::Shared) throw DataError("gbdt: needs shared embeddings");
    if (cw.k() != ds.k()) throw DataError("gbdt: class weights do not match the emotion count");
    const auto rows = embs.align(ds.ids());

    TreeEnsembleModel model;
    model.schema = ds.schema();
    model.dim = embs.d();
    model.learning_rate = cfg.learning_rate;
    model.config = cfg;
    model.base_scores.assign(ds.k(), 0.0);
    model.trees.resize(ds.k());
    model.round_loss.resize(ds.k());

    const std::size_t k = ds.k();
    for_each_index(k, cfg.workers, [&](std::size_t j) { boost_emotion(model, j, embs, rows, ds, cfg, cw); });
    return model;
}

GbdtPrediction predict_gbdt(const TreeEnsembleModel& model, const EmbeddingSet& embs,
                            std::span<const std::string> ids, double threshold) {
    if (embs.variant() != EmbeddingVariant::Shared) throw DataError("gbdt: needs shared embeddings");
    if (embs.d() != model.dim) {
        throw DataError("gbdt: embedding dimension " + std::to_string(embs.d()) + " differs from model dimension " +
                        std::to_string(model.dim));
    }
    const auto rows = embs.align(ids);
    const std::size_t k = model.schema.k();
    RealMatrix proba(ids.size(), k);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t j = 0; j < k; ++j) proba(r, j) = sigmoid(model.raw_score(j, embs.row(rows[r])));
    }
    auto labels = apply_threshold(proba, threshold);
    return {std::move(proba), std::move(labels)};
}

GbdtPrediction predict_gbdt(const TreeEnsembleModel& model, const EmbeddingSet& embs, double threshold) {
    return predict_gbdt(model, embs, embs.ids(), threshold);
}

namespace {

nlohmann::json node_to_json(const RegressionTree& t, std::size_t i) {
    const auto& n = t.nodes[i];
    if (n.is_leaf()) return {{"leaf", n.value}};
    return {
        {"feature", n.feature},
        {"threshold", n.threshold},
        {"left", node_to_json(t, static_cast<std::size_t>(n.left))},
        {"right", node_to_json(t, static_cast<std::size_t>(n.right))},
    };
}

int node_from_json(RegressionTree& t, const nlohmann::json& j, std::size_t dim) {
    const int id = static_cast<int>(t.nodes.size());
    t.nodes.emplace_back();
    if (j.contains("leaf")) {
        const double v = j.at("leaf").get<double>();
        if (!std::isfinite(v)) throw DataError("gbdt: non-finite leaf value");
        t.nodes[static_cast<std::size_t>(id)].value = v;
        return id;
    }
    const int feature = j.at("feature").get<int>();
    if (feature < 0 || static_cast<std::size_t>(feature) >= dim) throw DataError("gbdt: split feature out of range");
    const double threshold = j.at("threshold").get<double>();
    const int l = node_from_json(t, j.at("left"), dim);
    const int r = node_from_json(t, j.at("right"), dim);
    auto& n = t.nodes[static_cast<std::size_t>(id)];
    n.feature = feature;
    n.threshold = threshold;
    n.left = l;
    n.right = r;
    return id;
}

}  // namespace

nlohmann::json to_json(const TreeEnsembleModel& model) {
    nlohmann::json chains = nlohmann::json::array();
    for (std::size_t j = 0; j < model.schema.k(); ++j) {
        nlohmann::json trees = nlohmann::json::array();
        for (const auto& t : model.trees[j]) trees.push_back(t.nodes.empty() ? nlohmann::json{{"leaf", 0.0}} : node_to_json(t, 0));
        chains.push_back({{"emotion", model.schema[j]}, {"base_score", model.base_scores[j]}, {"trees", std::move(trees)}});
    }
    return {
        {"kind", "gbdt"},
        {"emotions", model.schema.emotions()},
        {"dim", model.dim},
        {"learning_rate", model.learning_rate},
        {"chains", std::move(chains)},
        {"config", to_json(model.config)},
    };
}

TreeEnsembleModel gbdt_from_json(const nlohmann::json& j) {
    try {
        if (j.at("kind") != "gbdt") throw DataError("model is not a gbdt ensemble");
        TreeEnsembleModel m;
        m.schema = EmotionSchema(j.at("emotions").get<std::vector<std::string>>());
        m.dim = j.at("dim").get<std::size_t>();
        m.learning_rate = j.at("learning_rate").get<double>();
        m.config = gbdt_config_from_json(j.at("config"));
        const auto& chains = j.at("chains");
        if (chains.size() != m.schema.k()) throw DataError("gbdt: chain count differs from emotion count");
        m.trees.resize(m.schema.k());
        m.round_loss.resize(m.schema.k());
        for (std::size_t e = 0; e < chains.size(); ++e) {
            m.base_scores.push_back(chains[e].at("base_score").get<double>());
            for (const auto& t : chains[e].at("trees")) {
                RegressionTree tree;
                node_from_json(tree, t, m.dim);
                m.trees[e].push_back(std::move(tree));
            }
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("gbdt: malformed model JSON: ") + e.what());
    } catch (const ConfigError& e) {
        throw DataError(std::string("gbdt: ") + e.what());
    }
}

}  // namespace emolab
