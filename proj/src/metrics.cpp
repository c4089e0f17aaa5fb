#include "emolab/metrics.hpp"

#include <cstdio>

#include "emolab/error.hpp"

namespace emolab {

namespace {

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

EvalReport f1_scores(const BinaryMatrix& pred, const BinaryMatrix& gold, std::span<const std::string> emotions,
                     std::string language) {
    if (!pred.same_shape(gold)) {
        throw DataError("f1: prediction shape " + std::to_string(pred.rows()) + "x" + std::to_string(pred.cols()) +
                        " differs from gold " + std::to_string(gold.rows()) + "x" + std::to_string(gold.cols()));
    }
    if (!emotions.empty() && emotions.size() != gold.cols()) {
        throw DataError("f1: emotion name count differs from column count");
    }
    const std::size_t k = gold.cols();
    EvalReport report;
    report.language = std::move(language);
    report.n = gold.rows();
    report.per_emotion.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        auto& s = report.per_emotion[j];
        s.emotion = emotions.empty() ? "e" + std::to_string(j) : emotions[j];
        for (std::size_t i = 0; i < gold.rows(); ++i) {
            const bool p = pred(i, j) != 0, g = gold(i, j) != 0;
            s.tp += p && g;
            s.fp += p && !g;
            s.fn += !p && g;
        }
        const double tp = static_cast<double>(s.tp);
        s.precision = safe_ratio(tp, tp + static_cast<double>(s.fp));
        s.recall = safe_ratio(tp, tp + static_cast<double>(s.fn));
        s.f1 = safe_ratio(2.0 * tp, 2.0 * tp + static_cast<double>(s.fp + s.fn));
    }
    double sum = 0.0;
    for (const auto& s : report.per_emotion) sum += s.f1;
    report.macro_f1 = k ? sum / static_cast<double>(k) : 0.0;
    return report;
}

nlohmann::json to_json(const EvalReport& report) {
    nlohmann::json per = nlohmann::json::array();
    for (const auto& s : report.per_emotion) {
        per.push_back({{"emotion", s.emotion}, {"tp", s.tp}, {"fp", s.fp}, {"fn", s.fn},
                       {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}});
    }
    return {{"language", report.language}, {"n", report.n}, {"macro_f1", report.macro_f1}, {"per_emotion", std::move(per)}};
}

EvalReport report_from_json(const nlohmann::json& j) {
    try {
        EvalReport r;
        r.language = j.at("language").get<std::string>();
        r.n = j.at("n").get<std::size_t>();
        r.macro_f1 = j.at("macro_f1").get<double>();
        for (const auto& e : j.at("per_emotion")) {
            EmotionScore s;
            s.emotion = e.at("emotion").get<std::string>();
            s.tp = e.value("tp", std::size_t{0});
            s.fp = e.value("fp", std::size_t{0});
            s.fn = e.value("fn", std::size_t{0});
            s.precision = e.at("precision").get<double>();
            s.recall = e.at("recall").get<double>();
            s.f1 = e.at("f1").get<double>();
            r.per_emotion.push_back(std::move(s));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed evaluation report: ") + e.what());
    }
}

std::string markdown_row(const EvalReport& report) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * report.macro_f1);
    return "| " + report.language + " | " + buf + " |";
}

double language_average(const ScoreTable& table, std::string_view model) {
    const auto m = table.model_index(model);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t l = 0; l < table.languages().size(); ++l) {
        if (auto s = table.score(m, l)) {
            sum += *s;
            ++count;
        }
    }
    if (count == 0) throw DataError("model '" + std::string(model) + "' has no scores to average");
    return sum / static_cast<double>(count);
}

WinCount win_count(const ScoreTable& table, std::string_view a, std::string_view b) {
    const auto ia = table.model_index(a);
    const auto ib = table.model_index(b);
    WinCount w;
    for (std::size_t l = 0; l < table.languages().size(); ++l) {
        const auto sa = table.score(ia, l), sb = table.score(ib, l);
        if (!sa || !sb) continue;
        if (*sa > *sb) ++w.wins;
        else if (*sa < *sb) ++w.losses;
        else ++w.ties;
    }
    return w;
}

}  // namespace emolab
