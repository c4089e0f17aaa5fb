#include "emolab/losses.hpp"

#include <algorithm>
#include <cmath>

#include "emolab/error.hpp"

namespace emolab {

ClassWeights class_weights(std::span<const LabelCounts> counts, std::size_t total) {
    if (total == 0) throw DataError("class weights: total sample count is zero");
    const double n = static_cast<double>(total);
    ClassWeights w;
    w.positive.reserve(counts.size());
    w.negative.reserve(counts.size());
    for (const auto& c : counts) {
        if (c.positives + c.negatives != total) {
            throw DataError("class weights: positives + negatives differs from the total");
        }
        w.positive.push_back(c.positives ? n / (static_cast<double>(c.positives) * 2.0) : n);
        w.negative.push_back(c.negatives ? n / (static_cast<double>(c.negatives) * 2.0) : n);
    }
    return w;
}

std::string_view loss_name(LossKind kind) noexcept {
    switch (kind) {
        case LossKind::WeightedBce: return "WEIGHTED_BCE";
        case LossKind::Focal: return "FOCAL";
        case LossKind::Asymmetric: return "ASYMMETRIC";
    }
    return "?";
}

LossKind parse_loss(std::string_view name) {
    if (name == "WEIGHTED_BCE" || name == "weighted_bce" || name == "BCE") return LossKind::WeightedBce;
    if (name == "FOCAL" || name == "focal" || name == "FL") return LossKind::Focal;
    if (name == "ASYMMETRIC" || name == "asymmetric" || name == "AL") return LossKind::Asymmetric;
    throw ConfigError("unknown loss: '" + std::string(name) + "'");
}

double clamp_probability(double p) noexcept { return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon); }

double sigmoid(double z) noexcept {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

LossGrad weighted_bce(double p, bool y, double w) {
    p = clamp_probability(p);
    const double loss = y ? -std::log(p) : -std::log1p(-p);
    return {w * loss, w * (p - (y ? 1.0 : 0.0))};
}

namespace {

// -(1-q)^gamma log q and its derivative along dq/dz = q(1-q).
LossGrad focal_term(double q, double gamma) {
    const double one_minus = 1.0 - q;
    const double log_q = std::log(q);
    const double mod = std::pow(one_minus, gamma);
    const double loss = -mod * log_q;
    const double grad = gamma * q * mod * log_q - mod * one_minus;
    return {loss, grad};
}

}  // namespace

LossGrad focal_loss(double p, bool y, const FocalParams& params, double alpha) {
    p = clamp_probability(p);
    // p_t moves with z for positives and against it for negatives.
    const double pt = y ? p : 1.0 - p;
    auto term = focal_term(pt, params.gamma);
    const double sign = y ? 1.0 : -1.0;
    return {alpha * term.loss, sign * alpha * term.grad};
}

LossGrad asymmetric_loss(double p, bool y, const AsymmetricParams& params) {
    p = clamp_probability(p);
    if (y) return focal_term(p, params.gamma_pos);

    const double pm = std::max(p - params.margin, 0.0);
    if (pm <= 0.0) return {0.0, 0.0};
    const double log1m = std::log1p(-pm);
    const double pow_g = std::pow(pm, params.gamma_neg);
    const double loss = -pow_g * log1m;
    // d/dp_m of the loss, times dp_m/dz = p(1-p).
    double dpm = pow_g / (1.0 - pm);
    if (params.gamma_neg != 0.0) dpm -= params.gamma_neg * std::pow(pm, params.gamma_neg - 1.0) * log1m;
    return {loss, p * (1.0 - p) * dpm};
}

LossGrad evaluate_loss(const LossSpec& spec, double p, bool y, double w) {
    switch (spec.kind) {
        case LossKind::WeightedBce: return weighted_bce(p, y, w);
        case LossKind::Focal: return focal_loss(p, y, spec.focal, w);
        case LossKind::Asymmetric: return asymmetric_loss(p, y, spec.asymmetric);
    }
    return {};
}

}  // namespace emolab
