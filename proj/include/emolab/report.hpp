#pragma once

#include <span>
#include <string>

#include "emolab/dataset.hpp"
#include "emolab/metrics.hpp"

namespace emolab {

struct RenderedReport {
    std::string markdown;  // languages as rows, models as columns, final average row
    std::string csv;       // score-table layout: model rows, language columns, trailing average column
};

// Markdown cells use 2-decimal fixed point and "-" for missing scores. CSV
// cells use the shortest round-trip representation so that loading the CSV
// back yields the same scores; its `average` column is skipped on load.
RenderedReport render_report(const ScoreTable& table);

// Single-model table from evaluation reports, macro-F1 in percent.
ScoreTable score_table_from_reports(std::span<const EvalReport> reports, const std::string& model);
RenderedReport render_report(std::span<const EvalReport> reports, const std::string& model);

}  // namespace emolab
