#include "emolab/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "emolab/error.hpp"
#include "emolab/metrics.hpp"

namespace emolab {

namespace {

std::vector<double> with_fallback(std::vector<double> w) {
    if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) std::fill(w.begin(), w.end(), 1.0);
    return w;
}

}  // namespace

BinaryMatrix weighted_vote(const EnsembleSpec& spec) {
    if (spec.members.empty()) throw DataError("ensemble: no members");
    const auto& first = spec.members.front().predictions;
    std::vector<double> raw;
    for (const auto& m : spec.members) {
        if (!m.predictions.same_shape(first)) throw DataError("ensemble: member prediction shapes differ");
        if (!(m.weight >= 0.0) || !std::isfinite(m.weight)) throw DataError("ensemble: weights must be finite and non-negative");
        raw.push_back(m.weight);
    }
    const auto w = with_fallback(std::move(raw));

    BinaryMatrix out(first.rows(), first.cols());
    const std::size_t cells = first.data().size();
    for (std::size_t c = 0; c < cells; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += spec.members[i].predictions.data()[c] ? w[i] : -w[i];
        out.data()[c] = s > 0.0 ? 1 : 0;
    }
    return out;
}

std::vector<double> dev_weights(const ScoreTable& table, std::span<const std::string> models,
                                std::optional<std::string_view> language) {
    std::optional<std::size_t> lang;
    if (language) {
        lang = table.find_language(*language);
        if (!lang) throw DataError("dev scores have no column for language '" + std::string(*language) + "'");
    }
    std::vector<double> w;
    w.reserve(models.size());
    for (const auto& m : models) {
        if (lang) w.push_back(table.score(table.model_index(m), *lang).value_or(0.0));
        else w.push_back(language_average(table, m));
    }
    return with_fallback(std::move(w));
}

}  // namespace emolab
