#include "emolab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <regex>

#include "emolab/error.hpp"
#include "emolab/metrics.hpp"

namespace emolab {

std::string_view method_name(TestMethod m) noexcept { return m == TestMethod::Exact ? "exact" : "normal"; }

bool tied(double a, double b) noexcept {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= kTieTolerance * scale;
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i + 1;
        while (j < n && tied(values[order[i]], values[order[j]])) ++j;
        // positions i..j-1 (0-based) share rank ((i+1) + j) / 2
        const double r = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) ranks[order[t]] = r;
        i = j;
    }
    return ranks;
}

namespace {

// Sum of t^3 - t over tie groups of the (already ranked) values.
double tie_term(std::span<const double> ranks) {
    std::vector<double> sorted(ranks.begin(), ranks.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        sum += t * t * t - t;
        i = j;
    }
    return sum;
}

long doubled(double rank) { return std::lround(2.0 * rank); }

double two_sided(double p_le, double p_ge) { return std::min(1.0, 2.0 * std::min(p_le, p_ge)); }

double normal_two_sided(double stat, double mean, double var) {
    if (!(var > 0.0)) return 1.0;
    const double z = std::max(0.0, std::abs(stat - mean) - 0.5) / std::sqrt(var);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

}  // namespace

TestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DataError("wilcoxon: sample lengths differ");
    if (a.empty()) throw DataError("wilcoxon: empty samples");

    std::vector<double> abs_diff;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (tied(a[i], b[i])) continue;
        const double d = a[i] - b[i];
        abs_diff.push_back(std::abs(d));
        positive.push_back(d > 0.0);
    }
    TestResult r;
    r.n_effective = abs_diff.size();
    if (r.n_effective == 0) {
        r.degenerate = true;
        return r;
    }
    const auto ranks = average_ranks(abs_diff);
    const std::size_t n = ranks.size();
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (positive[i]) w += ranks[i];
    }
    r.statistic = w;

    if (n <= kWilcoxonExactMaxN) {
        r.method = TestMethod::Exact;
        // count[s]: sign assignments whose positive doubled-rank sum is s.
        long max_sum = 0;
        for (double rk : ranks) max_sum += doubled(rk);
        std::vector<double> count(static_cast<std::size_t>(max_sum) + 1, 0.0);
        count[0] = 1.0;
        long reach = 0;
        for (double rk : ranks) {
            const long step = doubled(rk);
            for (long s = reach; s >= 0; --s) count[static_cast<std::size_t>(s + step)] += count[static_cast<std::size_t>(s)];
            reach += step;
        }
        const long observed = doubled(w);
        double le = 0.0, ge = 0.0;
        for (long s = 0; s <= max_sum; ++s) {
            if (s <= observed) le += count[static_cast<std::size_t>(s)];
            if (s >= observed) ge += count[static_cast<std::size_t>(s)];
        }
        const double total = std::ldexp(1.0, static_cast<int>(n));
        r.p_value = two_sided(le / total, ge / total);
    } else {
        r.method = TestMethod::NormalApprox;
        const double nn = static_cast<double>(n);
        const double mean = nn * (nn + 1.0) / 4.0;
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term(ranks) / 48.0;
        r.p_value = normal_two_sided(w, mean, var);
    }
    return r;
}

TestResult mann_whitney_u(std::span<const double> xs, std::span<const double> ys) {
    if (xs.empty() || ys.empty()) throw DataError("mann-whitney: both samples must be non-empty");
    const std::size_t n1 = xs.size(), n2 = ys.size(), big_n = n1 + n2;
    std::vector<double> pooled(xs.begin(), xs.end());
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    const auto ranks = average_ranks(pooled);
    double rank_sum_x = 0.0;
    for (std::size_t i = 0; i < n1; ++i) rank_sum_x += ranks[i];
    const double d1 = static_cast<double>(n1), d2 = static_cast<double>(n2);

    TestResult r;
    r.n_effective = big_n;
    r.statistic = rank_sum_x - d1 * (d1 + 1.0) / 2.0;

    if (n1 * n2 <= kMannWhitneyExactMaxProduct) {
        r.method = TestMethod::Exact;
        // Distribution of the smaller group's doubled rank sum over all
        // C(N, m) equally likely arrangements of the pooled mid-ranks.
        const bool x_small = n1 <= n2;
        const std::size_t m = x_small ? n1 : n2;
        long max_sum = 0;
        for (double rk : ranks) max_sum += doubled(rk);
        const auto width = static_cast<std::size_t>(max_sum) + 1;
        std::vector<double> dp((m + 1) * width, 0.0);
        dp[0] = 1.0;
        long reach = 0;
        for (std::size_t item = 0; item < big_n; ++item) {
            const long step = doubled(ranks[item]);
            for (std::size_t c = std::min(m, item + 1); c >= 1; --c) {
                double* to = dp.data() + c * width;
                const double* from = dp.data() + (c - 1) * width;
                for (long s = reach; s >= 0; --s) to[s + step] += from[s];
            }
            reach += step;
        }
        long observed = 0;
        for (std::size_t i = 0; i < big_n; ++i) {
            if ((i < n1) == x_small) observed += doubled(ranks[i]);
        }
        const double* row = dp.data() + m * width;
        double le = 0.0, ge = 0.0, total = 0.0;
        for (long s = 0; s <= max_sum; ++s) {
            total += row[s];
            if (s <= observed) le += row[s];
            if (s >= observed) ge += row[s];
        }
        r.p_value = two_sided(le / total, ge / total);
    } else {
        r.method = TestMethod::NormalApprox;
        const double nn = static_cast<double>(big_n);
        const double mean = d1 * d2 / 2.0;
        const double var = d1 * d2 / 12.0 * ((nn + 1.0) - tie_term(ranks) / (nn * (nn - 1.0)));
        r.p_value = normal_two_sided(r.statistic, mean, var);
    }
    return r;
}

ComparisonSpec comparison_from_json(const nlohmann::json& j) {
    try {
        ComparisonSpec s;
        s.name = j.value("name", std::string{});
        const auto mode = j.value("mode", std::string("paired"));
        if (mode == "paired") {
            s.mode = ComparisonSpec::Mode::Paired;
            s.factor_a = j.value("factor_a", std::string{});
            s.factor_b = j.value("factor_b", std::string{});
            if (j.contains("pairs")) {
                for (const auto& p : j["pairs"]) s.pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
            }
            if (s.pairs.empty() && (s.factor_a.empty() || s.factor_b.empty())) {
                throw ConfigError("comparison '" + s.name + "': paired mode needs factor_a/factor_b or pairs");
            }
        } else if (mode == "unpaired") {
            s.mode = ComparisonSpec::Mode::Unpaired;
            s.group_a = j.at("group_a").get<std::vector<std::string>>();
            s.group_b = j.value("group_b", std::vector<std::string>{});
        } else {
            throw ConfigError("comparison mode must be 'paired' or 'unpaired', got '" + mode + "'");
        }
        if (s.name.empty()) {
            s.name = s.mode == ComparisonSpec::Mode::Paired && s.pairs.empty() ? s.factor_a + " vs " + s.factor_b : "comparison";
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed comparison spec: ") + e.what());
    }
}

std::vector<ComparisonSpec> comparisons_from_json(const nlohmann::json& j) {
    std::vector<ComparisonSpec> out;
    const auto& list = j.is_object() && j.contains("comparisons") ? j["comparisons"] : j;
    if (list.is_array()) {
        for (const auto& c : list) out.push_back(comparison_from_json(c));
    } else {
        out.push_back(comparison_from_json(list));
    }
    return out;
}

namespace {

std::vector<std::string> split_tokens(const std::string& name) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = name.find('-', start);
        out.push_back(name.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back('-');
        out += tokens[i];
    }
    return out;
}

bool matches_any(const std::string& name, const std::vector<std::regex>& patterns) {
    return std::any_of(patterns.begin(), patterns.end(), [&](const std::regex& re) { return std::regex_search(name, re); });
}

std::vector<std::regex> compile(const std::vector<std::string>& patterns) {
    std::vector<std::regex> out;
    for (const auto& p : patterns) {
        try {
            out.emplace_back(p);
        } catch (const std::regex_error& e) {
            throw ConfigError("invalid model pattern '" + p + "': " + e.what());
        }
    }
    return out;
}

}  // namespace

ComparisonResult compare_models(const ScoreTable& table, const ComparisonSpec& spec) {
    ComparisonResult out;
    out.name = spec.name;
    if (spec.mode == ComparisonSpec::Mode::Paired) {
        out.test = "wilcoxon";
        if (!spec.pairs.empty()) {
            for (const auto& [a, b] : spec.pairs) {
                table.model_index(a);
                table.model_index(b);
                out.pairs.emplace_back(a, b);
            }
        } else {
            for (const auto& model : table.models()) {
                auto tokens = split_tokens(model);
                auto it = std::find(tokens.begin(), tokens.end(), spec.factor_a);
                if (it == tokens.end()) continue;
                *it = spec.factor_b;
                const auto partner = join_tokens(tokens);
                if (table.find_model(partner)) out.pairs.emplace_back(model, partner);
            }
        }
        if (out.pairs.empty()) throw DataError("comparison '" + spec.name + "': no model pairs found");
        for (const auto& [a, b] : out.pairs) {
            out.scores_a.push_back(language_average(table, a));
            out.scores_b.push_back(language_average(table, b));
        }
        out.result = wilcoxon_signed_rank(out.scores_a, out.scores_b);
        return out;
    }

    out.test = "mann_whitney";
    const auto pa = compile(spec.group_a);
    const auto pb = compile(spec.group_b);
    for (const auto& model : table.models()) {
        if (matches_any(model, pa)) out.group_a.push_back(model);
        else if (spec.group_b.empty() || matches_any(model, pb)) out.group_b.push_back(model);
    }
    if (out.group_a.empty() || out.group_b.empty()) {
        throw DataError("comparison '" + spec.name + "': a group matched no models");
    }
    for (const auto& m : out.group_a) out.scores_a.push_back(language_average(table, m));
    for (const auto& m : out.group_b) out.scores_b.push_back(language_average(table, m));
    out.result = mann_whitney_u(out.scores_a, out.scores_b);
    const double n1 = static_cast<double>(out.group_a.size());
    out.rank_sum_a = out.result.statistic + n1 * (n1 + 1.0) / 2.0;
    return out;
}

std::string narrative_row(const ComparisonResult& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "| %s | %s | %.1f | %.4g | %zu | %s |", r.name.c_str(), r.test.c_str(),
                  r.result.statistic, r.result.p_value, r.result.n_effective,
                  r.result.degenerate ? "degenerate" : std::string(method_name(r.result.method)).c_str());
    return buf;
}

}  // namespace emolab
