#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "emolab/dataset.hpp"
#include "emolab/embedstore.hpp"
#include "emolab/losses.hpp"
#include "emolab/matrix.hpp"

namespace emolab {

struct GbdtConfig {
    std::size_t n_trees = 100;
    std::size_t max_depth = 4;
    double learning_rate = 0.1;
    std::size_t min_samples_leaf = 2;
    std::uint64_t seed = 42;  // recorded only; exact greedy training is deterministic
    bool use_class_weights = true;
    unsigned workers = 1;

    void validate() const;
};

nlohmann::json to_json(const GbdtConfig& cfg);
GbdtConfig gbdt_config_from_json(const nlohmann::json& j);

inline constexpr double kLeafClamp = 4.0;

// Axis-aligned regression tree stored as a flat node array; node 0 is the
// root. Samples with x[feature] <= threshold go left.
struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const noexcept { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const float> x) const;
    std::size_t depth() const;  // edges on the longest root-to-leaf path
    bool operator==(const RegressionTree&) const = default;
};

// One boosted chain per emotion (one-vs-rest).
struct TreeEnsembleModel {
    EmotionSchema schema;
    std::size_t dim = 0;
    double learning_rate = 0.1;
    std::vector<double> base_scores;                 // per emotion, log-odds
    std::vector<std::vector<RegressionTree>> trees;  // per emotion
    // Weighted mean logistic loss on the training set after 0..n_trees rounds.
    std::vector<std::vector<double>> round_loss;
    GbdtConfig config;

    double raw_score(std::size_t emotion, std::span<const float> x) const;
};

// Boosted logistic regression trees: start at the weighted prior log-odds,
// fit each tree to the residuals y - p by weighted variance reduction (exact
// greedy scan, ties to the lower feature index then lower threshold), and
// set leaves to the weighted Newton step clamped to [-4, 4].
TreeEnsembleModel train_gbdt(const EmbeddingSet& embs, const LabeledDataset& ds, const GbdtConfig& cfg,
                             const ClassWeights& weights);

struct GbdtPrediction {
    RealMatrix proba;
    BinaryMatrix labels;
};

GbdtPrediction predict_gbdt(const TreeEnsembleModel& model, const EmbeddingSet& embs,
                            std::span<const std::string> ids, double threshold = 0.5);
GbdtPrediction predict_gbdt(const TreeEnsembleModel& model, const EmbeddingSet& embs,
                            double threshold = 0.5);

nlohmann::json to_json(const TreeEnsembleModel& model);
TreeEnsembleModel gbdt_from_json(const nlohmann::json& j);

}  // namespace emolab
