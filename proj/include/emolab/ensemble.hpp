#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emolab/dataset.hpp"
#include "emolab/matrix.hpp"

namespace emolab {

struct EnsembleMember {
    BinaryMatrix predictions;
    double weight = 1.0;
};

struct EnsembleSpec {
    std::vector<EnsembleMember> members;
    std::string weight_source;  // e.g. "dev macro-F1, eng"
};

// Each member votes +1 for a predicted 1 and -1 for a 0; a cell is 1 iff the
// weighted vote sum is strictly positive. All-zero weights fall back to
// uniform weights; a single zero weight contributes nothing.
BinaryMatrix weighted_vote(const EnsembleSpec& spec);

// Member weights from development scores: the per-language score when
// `language` is given (a missing cell weighs 0), else the cross-language
// average. All-zero weights fall back to 1.0 each.
std::vector<double> dev_weights(const ScoreTable& table, std::span<const std::string> models,
                                std::optional<std::string_view> language = std::nullopt);

}  // namespace emolab
