#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "emolab/dataset.hpp"
#include "emolab/matrix.hpp"

namespace emolab {

struct EmotionScore {
    std::string emotion;
    std::size_t tp = 0, fp = 0, fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct EvalReport {
    std::string language;
    std::size_t n = 0;
    std::vector<EmotionScore> per_emotion;
    double macro_f1 = 0.0;  // unweighted mean of per-emotion F1
};

// F1 = 2TP / (2TP + FP + FN); an emotion with no gold and no predicted
// positives scores 0. Emotion names default to "e0", "e1", ...
EvalReport f1_scores(const BinaryMatrix& pred, const BinaryMatrix& gold,
                     std::span<const std::string> emotions = {}, std::string language = {});

nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

// `| language | model |`-style row: language then macro-F1 in percent, 2 decimals.
std::string markdown_row(const EvalReport& report);

// Mean over the model's non-missing language scores.
double language_average(const ScoreTable& table, std::string_view model);

struct WinCount {
    std::size_t wins = 0;
    std::size_t losses = 0;
    std::size_t ties = 0;
    std::size_t compared() const noexcept { return wins + losses + ties; }
    bool operator==(const WinCount&) const = default;
};

// Compared over languages where both models have a score.
WinCount win_count(const ScoreTable& table, std::string_view a, std::string_view b);

}  // namespace emolab
