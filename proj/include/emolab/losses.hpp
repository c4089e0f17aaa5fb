#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "emolab/dataset.hpp"

namespace emolab {

// Per-emotion binary class weights, w = N / (count * 2) for the positive and
// negative class of each emotion. A class with zero members gets weight N.
struct ClassWeights {
    std::vector<double> positive;
    std::vector<double> negative;

    std::size_t k() const noexcept { return positive.size(); }
    double for_label(std::size_t emotion, bool y) const { return y ? positive[emotion] : negative[emotion]; }
    static ClassWeights uniform(std::size_t k) { return {std::vector<double>(k, 1.0), std::vector<double>(k, 1.0)}; }
};

ClassWeights class_weights(std::span<const LabelCounts> counts, std::size_t total);

struct FocalParams {
    double gamma = 2.0;
};

struct AsymmetricParams {
    double gamma_pos = 0.0;
    double gamma_neg = 4.0;
    double margin = 0.05;
};

enum class LossKind { WeightedBce, Focal, Asymmetric };

std::string_view loss_name(LossKind kind) noexcept;
LossKind parse_loss(std::string_view name);

// Loss value and its derivative with respect to the logit z, where p = sigmoid(z).
struct LossGrad {
    double loss = 0.0;
    double grad = 0.0;
};

inline constexpr double kProbEpsilon = 1e-7;

double clamp_probability(double p) noexcept;
double sigmoid(double z) noexcept;

// -w * [y log p + (1-y) log(1-p)]
LossGrad weighted_bce(double p, bool y, double w);

// -alpha (1 - p_t)^gamma log p_t with alpha = w_y.
LossGrad focal_loss(double p, bool y, const FocalParams& params, double alpha);

// Positives: -(1-p)^gamma_pos log p.
// Negatives: with p_m = max(p - margin, 0), -(p_m)^gamma_neg log(1 - p_m);
// zero loss and zero gradient below the margin.
LossGrad asymmetric_loss(double p, bool y, const AsymmetricParams& params);

struct LossSpec {
    LossKind kind = LossKind::WeightedBce;
    FocalParams focal;
    AsymmetricParams asymmetric;
};

// Dispatch on spec.kind; `w` is the class weight of the record's label
// (ignored by the asymmetric loss).
LossGrad evaluate_loss(const LossSpec& spec, double p, bool y, double w);

}  // namespace emolab
