#include "emolab/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "emolab/error.hpp"
#include "emolab/parallel.hpp"
#include "emolab/rng.hpp"

namespace emolab {

std::string_view strategy_name(HeadStrategy s) noexcept {
    switch (s) {
        case HeadStrategy::MultiOutput: return "MO";
        case HeadStrategy::BinaryRelevance: return "BR";
        case HeadStrategy::PerEmotionEmbedding: return "PER_EMOTION_EMB";
    }
    return "?";
}

HeadStrategy parse_strategy(std::string_view name) {
    if (name == "MO") return HeadStrategy::MultiOutput;
    if (name == "BR") return HeadStrategy::BinaryRelevance;
    if (name == "PER_EMOTION_EMB") return HeadStrategy::PerEmotionEmbedding;
    throw ConfigError("unknown head strategy: '" + std::string(name) + "'");
}

void HeadConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be positive");
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    if (!(warmup_fraction >= 0.0 && warmup_fraction <= 0.5)) throw ConfigError("warmup_fraction must lie in [0, 0.5]");
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
    if (loss.focal.gamma < 0.0) throw ConfigError("focal gamma must be non-negative");
    if (loss.asymmetric.gamma_pos < 0.0 || loss.asymmetric.gamma_neg < 0.0) {
        throw ConfigError("asymmetric gammas must be non-negative");
    }
    if (!(loss.asymmetric.margin >= 0.0 && loss.asymmetric.margin < 1.0)) {
        throw ConfigError("asymmetric margin must lie in [0, 1)");
    }
}

nlohmann::json to_json(const HeadConfig& cfg) {
    return {
        {"strategy", strategy_name(cfg.strategy)},
        {"loss", loss_name(cfg.loss.kind)},
        {"focal_gamma", cfg.loss.focal.gamma},
        {"gamma_pos", cfg.loss.asymmetric.gamma_pos},
        {"gamma_neg", cfg.loss.asymmetric.gamma_neg},
        {"margin", cfg.loss.asymmetric.margin},
        {"learning_rate", cfg.learning_rate},
        {"epochs", cfg.epochs},
        {"batch_size", cfg.batch_size},
        {"warmup_fraction", cfg.warmup_fraction},
        {"seed", cfg.seed},
        {"threshold", cfg.threshold},
    };
}

HeadConfig head_config_from_json(const nlohmann::json& j) {
    HeadConfig cfg;
    if (!j.is_object()) throw ConfigError("head config must be a JSON object");
    try {
        if (j.contains("strategy")) cfg.strategy = parse_strategy(j["strategy"].get<std::string>());
        if (j.contains("loss")) cfg.loss.kind = parse_loss(j["loss"].get<std::string>());
        cfg.loss.focal.gamma = j.value("focal_gamma", cfg.loss.focal.gamma);
        cfg.loss.asymmetric.gamma_pos = j.value("gamma_pos", cfg.loss.asymmetric.gamma_pos);
        cfg.loss.asymmetric.gamma_neg = j.value("gamma_neg", cfg.loss.asymmetric.gamma_neg);
        cfg.loss.asymmetric.margin = j.value("margin", cfg.loss.asymmetric.margin);
        cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
        cfg.epochs = j.value("epochs", cfg.epochs);
        cfg.batch_size = j.value("batch_size", cfg.batch_size);
        cfg.warmup_fraction = j.value("warmup_fraction", cfg.warmup_fraction);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.threshold = j.value("threshold", cfg.threshold);
        cfg.workers = j.value("workers", cfg.workers);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("head config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

double schedule_factor(std::size_t step, std::size_t total_steps, double warmup_fraction) noexcept {
    const auto warmup = static_cast<std::size_t>(warmup_fraction * static_cast<double>(total_steps));
    if (step < warmup) return static_cast<double>(step) / static_cast<double>(warmup);
    const auto decay = total_steps - warmup;
    if (decay == 0 || step >= total_steps) return 0.0;
    return static_cast<double>(total_steps - step) / static_cast<double>(decay);
}

namespace {

struct Block {
    std::vector<std::size_t> emotions;   // emotions updated together
    std::vector<double> weights;         // |emotions| x d
    std::vector<double> biases;
    std::vector<double> epoch_loss_sum;  // summed over records and emotions
};

// Mini-batch gradient descent for a group of emotions sharing one shuffle.
// row(r, j): feature row of training record r queried for emotion j.
template <typename RowFn>
void fit_block(Block& block, std::size_t n, std::size_t d, const RowFn& row,
               const LabeledDataset& ds, std::span<const std::size_t> order_base,
               const HeadConfig& cfg, const ClassWeights& cw, std::uint64_t seed) {
    const std::size_t m = block.emotions.size();
    block.weights.assign(m * d, 0.0);
    block.biases.assign(m, 0.0);
    block.epoch_loss_sum.assign(cfg.epochs, 0.0);
    if (n == 0 || cfg.epochs == 0) return;

    const std::size_t batches = (n + cfg.batch_size - 1) / cfg.batch_size;
    const std::size_t total_steps = batches * cfg.epochs;
    Rng rng(seed);
    std::vector<std::size_t> order(order_base.begin(), order_base.end());
    std::vector<double> grad_w(m * d);
    std::vector<double> grad_b(m);

    std::size_t step = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(std::span(order));
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size, ++step) {
            const std::size_t end = std::min(n, start + cfg.batch_size);
            std::fill(grad_w.begin(), grad_w.end(), 0.0);
            std::fill(grad_b.begin(), grad_b.end(), 0.0);
            for (std::size_t b = start; b < end; ++b) {
                const std::size_t r = order[b];
                for (std::size_t e = 0; e < m; ++e) {
                    const std::size_t j = block.emotions[e];
                    const auto x = row(r, j);
                    const double* w = block.weights.data() + e * d;
                    double z = block.biases[e];
                    for (std::size_t i = 0; i < d; ++i) z += w[i] * x[i];
                    const bool y = ds[r].labels[j] != 0;
                    const auto lg = evaluate_loss(cfg.loss, sigmoid(z), y, cw.for_label(j, y));
                    epoch_loss += lg.loss;
                    double* gw = grad_w.data() + e * d;
                    for (std::size_t i = 0; i < d; ++i) gw[i] += lg.grad * x[i];
                    grad_b[e] += lg.grad;
                }
            }
            const double lr = cfg.learning_rate * schedule_factor(step, total_steps, cfg.warmup_fraction) /
                              static_cast<double>(end - start);
            for (std::size_t i = 0; i < m * d; ++i) block.weights[i] -= lr * grad_w[i];
            for (std::size_t e = 0; e < m; ++e) block.biases[e] -= lr * grad_b[e];
        }
        const auto finite = [](double v) { return std::isfinite(v); };
        if (!std::isfinite(epoch_loss) || !std::all_of(block.weights.begin(), block.weights.end(), finite) ||
            !std::all_of(block.biases.begin(), block.biases.end(), finite)) {
            throw NumericError("training diverged: non-finite loss or parameters in epoch " + std::to_string(epoch + 1));
        }
        block.epoch_loss_sum[epoch] = epoch_loss;
    }
}

}  // namespace

TrainedHead train_head(const EmbeddingSet& embs, const LabeledDataset& ds, const HeadConfig& cfg,
                       const ClassWeights& cw) {
    cfg.validate();
    const std::size_t k = ds.k();
    const std::size_t d = embs.d();
    const std::size_t n = ds.size();
    if (cw.k() != k) throw DataError("class weights cover " + std::to_string(cw.k()) + " emotions, dataset has " + std::to_string(k));

    TrainedHead head;
    head.strategy = cfg.strategy;
    head.schema = ds.schema();
    head.config = cfg;
    if (embs.variant() != head.expected_variant()) {
        throw DataError(std::string("strategy ") + std::string(strategy_name(cfg.strategy)) + " needs " +
                        std::string(variant_name(head.expected_variant())) + " embeddings, got " +
                        std::string(variant_name(embs.variant())));
    }
    if (embs.variant() == EmbeddingVariant::PerEmotion) {
        if (embs.k() != k) throw DataError("per-emotion embeddings have k=" + std::to_string(embs.k()) + ", dataset has " + std::to_string(k));
        if (!embs.meta().emotions.empty() && embs.meta().emotions != ds.schema().emotions()) {
            throw DataError("per-emotion embedding emotion order differs from the dataset schema");
        }
    }
    const auto ids = ds.ids();
    const auto rows = embs.align(ids);

    // Canonical base order (by id) makes training independent of record order.
    std::vector<std::size_t> base(n);
    std::iota(base.begin(), base.end(), 0);
    std::sort(base.begin(), base.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });

    auto shared_row = [&](std::size_t r, std::size_t) { return embs.row(rows[r]); };
    auto emotion_row = [&](std::size_t r, std::size_t j) { return embs.row(rows[r], j); };

    std::vector<Block> blocks;
    if (cfg.strategy == HeadStrategy::MultiOutput) {
        blocks.resize(1);
        blocks[0].emotions.resize(k);
        std::iota(blocks[0].emotions.begin(), blocks[0].emotions.end(), 0);
        fit_block(blocks[0], n, d, shared_row, ds, base, cfg, cw, cfg.seed);
    } else {
        blocks.resize(k);
        for_each_index(k, cfg.workers, [&](std::size_t j) {
            blocks[j].emotions = {j};
            const auto seed = derive_seed(cfg.seed, j);
            if (cfg.strategy == HeadStrategy::BinaryRelevance) {
                fit_block(blocks[j], n, d, shared_row, ds, base, cfg, cw, seed);
            } else {
                fit_block(blocks[j], n, d, emotion_row, ds, base, cfg, cw, seed);
            }
        });
    }

    head.weights = RealMatrix(k, d);
    head.biases.assign(k, 0.0);
    head.epoch_loss.assign(cfg.epochs, 0.0);
    for (const auto& b : blocks) {
        for (std::size_t e = 0; e < b.emotions.size(); ++e) {
            const auto j = b.emotions[e];
            std::copy_n(b.weights.begin() + static_cast<std::ptrdiff_t>(e * d), d, head.weights.row(j).begin());
            head.biases[j] = b.biases[e];
        }
        for (std::size_t ep = 0; ep < cfg.epochs; ++ep) head.epoch_loss[ep] += b.epoch_loss_sum[ep];
    }
    if (n > 0) {
        for (auto& l : head.epoch_loss) l /= static_cast<double>(n * k);
    }
    return head;
}

RealMatrix predict_proba(const TrainedHead& head, const EmbeddingSet& embs,
                         std::span<const std::string> ids) {
    const std::size_t k = head.schema.k();
    if (embs.d() != head.dim()) {
        throw DataError("embedding dimension " + std::to_string(embs.d()) + " differs from head dimension " +
                        std::to_string(head.dim()));
    }
    if (embs.variant() != head.expected_variant()) {
        throw DataError("embedding variant does not match the head strategy");
    }
    if (embs.variant() == EmbeddingVariant::PerEmotion && embs.k() != k) {
        throw DataError("per-emotion embeddings have the wrong emotion count");
    }
    const auto rows = embs.align(ids);
    RealMatrix out(ids.size(), k);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t j = 0; j < k; ++j) {
            const auto x = embs.variant() == EmbeddingVariant::Shared ? embs.row(rows[r]) : embs.row(rows[r], j);
            const auto w = head.weights.row(j);
            double z = head.biases[j];
            for (std::size_t i = 0; i < x.size(); ++i) z += w[i] * x[i];
            out(r, j) = sigmoid(z);
        }
    }
    return out;
}

RealMatrix predict_proba(const TrainedHead& head, const EmbeddingSet& embs) {
    return predict_proba(head, embs, embs.ids());
}

BinaryMatrix apply_threshold(const RealMatrix& probs, double threshold) {
    BinaryMatrix out(probs.rows(), probs.cols());
    for (std::size_t i = 0; i < probs.data().size(); ++i) {
        out.data()[i] = probs.data()[i] >= threshold ? 1 : 0;
    }
    return out;
}

BinaryMatrix predict(const TrainedHead& head, const EmbeddingSet& embs, double threshold) {
    return apply_threshold(predict_proba(head, embs), threshold);
}

nlohmann::json to_json(const TrainedHead& head) {
    nlohmann::json weights = nlohmann::json::array();
    for (std::size_t j = 0; j < head.weights.rows(); ++j) {
        const auto r = head.weights.row(j);
        weights.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return {
        {"kind", "linear_head"},
        {"strategy", strategy_name(head.strategy)},
        {"emotions", head.schema.emotions()},
        {"dim", head.dim()},
        {"weights", std::move(weights)},
        {"biases", head.biases},
        {"epoch_loss", head.epoch_loss},
        {"config", to_json(head.config)},
    };
}

TrainedHead head_from_json(const nlohmann::json& j) {
    try {
        if (j.at("kind") != "linear_head") throw DataError("model is not a linear head");
        TrainedHead head;
        head.config = head_config_from_json(j.at("config"));
        head.strategy = parse_strategy(j.at("strategy").get<std::string>());
        head.schema = EmotionSchema(j.at("emotions").get<std::vector<std::string>>());
        const auto d = j.at("dim").get<std::size_t>();
        const auto& w = j.at("weights");
        if (w.size() != head.schema.k()) throw DataError("head: weight rows differ from emotion count");
        head.weights = RealMatrix(head.schema.k(), d);
        for (std::size_t r = 0; r < w.size(); ++r) {
            const auto row = w[r].get<std::vector<double>>();
            if (row.size() != d) throw DataError("head: weight row has the wrong dimension");
            std::copy(row.begin(), row.end(), head.weights.row(r).begin());
        }
        head.biases = j.at("biases").get<std::vector<double>>();
        if (head.biases.size() != head.schema.k()) throw DataError("head: bias count differs from emotion count");
        head.epoch_loss = j.value("epoch_loss", std::vector<double>{});
        return head;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("head: malformed model JSON: ") + e.what());
    } catch (const ConfigError& e) {
        throw DataError(std::string("head: ") + e.what());
    }
}

}  // namespace emolab
