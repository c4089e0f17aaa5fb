#include "emolab/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>

#include "emolab/csv.hpp"
#include "emolab/error.hpp"

namespace emolab {

namespace {

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::optional<double> average_of(const ScoreTable& t, std::size_t m) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t l = 0; l < t.languages().size(); ++l) {
        if (auto s = t.score(m, l)) {
            sum += *s;
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

}  // namespace

RenderedReport render_report(const ScoreTable& table) {
    const auto& models = table.models();
    const auto& langs = table.languages();
    if (models.empty() || langs.empty()) throw DataError("report: empty score table");

    std::vector<std::optional<double>> averages;
    for (std::size_t m = 0; m < models.size(); ++m) averages.push_back(average_of(table, m));

    RenderedReport out;
    std::string& md = out.markdown;
    md += "| language |";
    for (const auto& m : models) md += " " + m + " |";
    md += "\n|---|";
    for (std::size_t m = 0; m < models.size(); ++m) md += "---:|";
    md += "\n";
    for (std::size_t l = 0; l < langs.size(); ++l) {
        md += "| " + langs[l] + " |";
        for (std::size_t m = 0; m < models.size(); ++m) {
            const auto s = table.score(m, l);
            md += " " + (s ? fixed2(*s) : std::string("-")) + " |";
        }
        md += "\n";
    }
    md += "| average |";
    for (const auto& a : averages) md += " " + (a ? fixed2(*a) : std::string("-")) + " |";
    md += "\n";

    std::vector<std::string> header{"model"};
    header.insert(header.end(), langs.begin(), langs.end());
    header.emplace_back("average");
    out.csv = csv::format_row(header);
    for (std::size_t m = 0; m < models.size(); ++m) {
        std::vector<std::string> row{models[m]};
        for (std::size_t l = 0; l < langs.size(); ++l) {
            const auto s = table.score(m, l);
            row.push_back(s ? shortest(*s) : "-");
        }
        row.push_back(averages[m] ? fixed2(*averages[m]) : "-");
        out.csv += csv::format_row(row);
    }
    return out;
}

ScoreTable score_table_from_reports(std::span<const EvalReport> reports, const std::string& model) {
    std::vector<std::string> langs;
    std::vector<std::optional<double>> scores;
    for (const auto& r : reports) {
        langs.push_back(r.language);
        scores.emplace_back(100.0 * r.macro_f1);
    }
    return ScoreTable({model}, std::move(langs), std::move(scores));
}

RenderedReport render_report(std::span<const EvalReport> reports, const std::string& model) {
    return render_report(score_table_from_reports(reports, model));
}

}  // namespace emolab
