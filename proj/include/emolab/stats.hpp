#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "emolab/dataset.hpp"

namespace emolab {

enum class TestMethod { Exact, NormalApprox };
enum class Alternative { TwoSided };

std::string_view method_name(TestMethod m) noexcept;

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n_effective = 0;
    TestMethod method = TestMethod::Exact;
    Alternative alternative = Alternative::TwoSided;
    bool degenerate = false;  // nothing to test (e.g. all paired differences zero)
};

inline constexpr std::size_t kWilcoxonExactMaxN = 25;
inline constexpr std::size_t kMannWhitneyExactMaxProduct = 400;

// Values closer than this (relative to max(1, |a|, |b|)) count as tied, so
// decimal scores that differ only by floating-point noise share a rank.
inline constexpr double kTieTolerance = 1e-9;

bool tied(double a, double b) noexcept;

// 1-based ranks; tied values receive the average of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Differences a - b; zero differences dropped; W = sum of the ranks of the
// positive differences. Exact two-sided p (2 * smaller tail, capped at 1) by
// dynamic programming over signed-rank sums for n_effective <= 25; normal
// approximation with tie and continuity correction otherwise.
TestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

// U = #{x > y} + 1/2 #{x == y} over all pairs. Exact two-sided p over all
// rank arrangements (ties kept at their mid-ranks) when n1 * n2 <= 400;
// tie-corrected normal approximation otherwise.
TestResult mann_whitney_u(std::span<const double> xs, std::span<const double> ys);

// A comparison over a score table; each model contributes its cross-language
// average. Paired: models whose '-'-separated name contains token `factor_a`
// are paired with the model named identically except for `factor_b` in that
// position (or an explicit pair list is used). Unpaired: group_a / group_b
// are lists of regular expressions searched in model names; an empty group_b
// means every model not in group_a.
struct ComparisonSpec {
    enum class Mode { Paired, Unpaired };
    std::string name;
    Mode mode = Mode::Paired;
    std::string factor_a, factor_b;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::string> group_a, group_b;
};

ComparisonSpec comparison_from_json(const nlohmann::json& j);
std::vector<ComparisonSpec> comparisons_from_json(const nlohmann::json& j);

struct ComparisonResult {
    std::string name;
    std::string test;  // "wilcoxon" or "mann_whitney"
    TestResult result;
    std::vector<std::pair<std::string, std::string>> pairs;  // paired mode, for audit
    std::vector<std::string> group_a, group_b;               // unpaired mode
    std::vector<double> scores_a, scores_b;
    std::optional<double> rank_sum_a;  // unpaired: rank sum of group_a in the pooled ranking
};

ComparisonResult compare_models(const ScoreTable& table, const ComparisonSpec& spec);

// `| name | test | statistic | p | n | method |`
std::string narrative_row(const ComparisonResult& r);

}  // namespace emolab
