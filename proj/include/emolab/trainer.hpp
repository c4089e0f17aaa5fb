#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "emolab/dataset.hpp"
#include "emolab/embedstore.hpp"
#include "emolab/losses.hpp"
#include "emolab/matrix.hpp"

namespace emolab {

// MO: one head updating every emotion jointly per mini-batch.
// BR: each emotion trained independently on the shared embeddings.
// PER_EMOTION_EMB: each emotion trained on its own prompt-specific rows.
enum class HeadStrategy { MultiOutput, BinaryRelevance, PerEmotionEmbedding };

std::string_view strategy_name(HeadStrategy s) noexcept;
HeadStrategy parse_strategy(std::string_view name);

struct HeadConfig {
    HeadStrategy strategy = HeadStrategy::MultiOutput;
    LossSpec loss;
    double learning_rate = 0.05;
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    double warmup_fraction = 0.1;
    std::uint64_t seed = 42;
    double threshold = 0.5;
    // Threads for per-emotion strategies; results do not depend on it.
    unsigned workers = 1;

    void validate() const;
};

nlohmann::json to_json(const HeadConfig& cfg);
// Missing keys keep their defaults; throws ConfigError on bad values.
HeadConfig head_config_from_json(const nlohmann::json& j);

// One sigmoid unit per emotion: p(y_j | x) = sigmoid(W_j . x + b_j).
struct TrainedHead {
    HeadStrategy strategy = HeadStrategy::MultiOutput;
    EmotionSchema schema;
    RealMatrix weights;  // k x d
    std::vector<double> biases;
    std::vector<double> epoch_loss;  // mean loss per epoch over records and emotions
    HeadConfig config;

    std::size_t dim() const noexcept { return weights.cols(); }
    EmbeddingVariant expected_variant() const noexcept {
        return strategy == HeadStrategy::PerEmotionEmbedding ? EmbeddingVariant::PerEmotion
                                                             : EmbeddingVariant::Shared;
    }
};

// Linear warmup over warmup_fraction of the steps, then linear decay to 0.
double schedule_factor(std::size_t step, std::size_t total_steps, double warmup_fraction) noexcept;

// Plain mini-batch gradient descent from zero initialisation. Records are
// taken in id order, then shuffled each epoch by a generator seeded from
// cfg.seed (per-emotion strategies: seeded from (seed, emotion index)).
TrainedHead train_head(const EmbeddingSet& embs, const LabeledDataset& ds, const HeadConfig& cfg,
                       const ClassWeights& weights);

// Rows follow `ids`; the overload without ids covers every record of `embs`.
RealMatrix predict_proba(const TrainedHead& head, const EmbeddingSet& embs,
                         std::span<const std::string> ids);
RealMatrix predict_proba(const TrainedHead& head, const EmbeddingSet& embs);

// 1 iff probability >= threshold.
BinaryMatrix apply_threshold(const RealMatrix& probs, double threshold);
BinaryMatrix predict(const TrainedHead& head, const EmbeddingSet& embs, double threshold);

nlohmann::json to_json(const TrainedHead& head);
TrainedHead head_from_json(const nlohmann::json& j);

}  // namespace emolab
