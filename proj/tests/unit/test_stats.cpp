#include <doctest.h>

#include <cmath>
#include <random>

#include "emolab/error.hpp"
#include "emolab/metrics.hpp"
#include "emolab/stats.hpp"
#include "oracles.hpp"

using namespace emolab;

namespace {

ScoreTable dev_table() { return load_score_table(oracle::source_path("data/fixtures/dev_scores.csv")); }
ScoreTable test_table() { return load_score_table(oracle::source_path("data/fixtures/test_scores.csv")); }

// Scores on a coarse grid so that ties and zero differences occur often.
std::vector<double> grid_scores(std::mt19937_64& gen, std::size_t n) {
    std::uniform_int_distribution<int> d(0, 8);
    std::vector<double> v(n);
    for (auto& x : v) x = 50.0 + 0.5 * d(gen);
    return v;
}

}  // namespace

TEST_CASE("average ranks") {
    const std::vector<double> v{3.0, 1.0, 3.0, 2.0};
    CHECK(average_ranks(v) == std::vector<double>{3.5, 1.0, 3.5, 2.0});
    const std::vector<double> noisy{0.1 + 0.2, 0.3};
    CHECK(average_ranks(noisy) == std::vector<double>{1.5, 1.5});
}

TEST_CASE("Wilcoxon exact p equals sign-flip enumeration") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 gen(seed);
        const std::size_t n = 1 + seed % 10;
        const auto a = grid_scores(gen, n), b = grid_scores(gen, n);
        const auto r = wilcoxon_signed_rank(a, b);
        const auto o = oracle::wilcoxon_brute(a, b);
        if (r.degenerate) {
            CHECK(r.n_effective == 0);
            CHECK(r.p_value == 1.0);
            continue;
        }
        CHECK(r.method == TestMethod::Exact);
        CHECK(r.statistic == o.statistic);
        CHECK(r.p_value == doctest::Approx(o.p).epsilon(1e-12));
    }
}

TEST_CASE("Mann-Whitney exact p equals arrangement enumeration") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 gen(seed + 1000);
        const std::size_t n1 = 1 + seed % 5;
        const std::size_t n2 = 1 + (seed / 5) % (10 - n1);
        const auto xs = grid_scores(gen, n1), ys = grid_scores(gen, n2);
        const auto r = mann_whitney_u(xs, ys);
        const auto o = oracle::mann_whitney_brute(xs, ys);
        CHECK(r.method == TestMethod::Exact);
        CHECK(r.statistic == o.statistic);
        CHECK(r.p_value == doctest::Approx(o.p).epsilon(1e-12));
    }
}

TEST_CASE("small hand cases") {
    const std::vector<double> xs{4, 5, 6}, ys{1, 2, 3};
    const auto r = mann_whitney_u(xs, ys);
    CHECK(r.statistic == 9.0);
    CHECK(r.p_value == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(mann_whitney_u(xs, xs).statistic == 4.5);

    const std::vector<double> a{1, 2, 3, 4, 5}, b{0, 0, 0, 0, 0};
    const auto w = wilcoxon_signed_rank(a, b);
    CHECK(w.statistic == 15.0);
    CHECK(w.p_value == doctest::Approx(2.0 / 32.0).epsilon(1e-15));

    const auto same = wilcoxon_signed_rank(a, a);
    CHECK(same.degenerate);
    CHECK(same.p_value == 1.0);
    CHECK(same.n_effective == 0);
}

TEST_CASE("normal approximation branch") {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> a(40), b(40);
    for (std::size_t i = 0; i < 40; ++i) {
        a[i] = nd(gen) + 0.8;
        b[i] = nd(gen);
    }
    const auto w = wilcoxon_signed_rank(a, b);
    CHECK(w.method == TestMethod::NormalApprox);
    CHECK(w.p_value > 0.0);
    CHECK(w.p_value < 0.01);

    // Symmetric null data stays far from significance.
    std::vector<double> c(30), d(30);
    for (std::size_t i = 0; i < 30; ++i) {
        c[i] = static_cast<double>(i);
        d[i] = static_cast<double>(i) + (i % 2 ? 1.0 : -1.0);
    }
    const auto n = wilcoxon_signed_rank(c, d);
    CHECK(n.method == TestMethod::NormalApprox);
    CHECK(n.p_value > 0.5);

    std::vector<double> xs(25), ys(25);
    for (std::size_t i = 0; i < 25; ++i) {
        xs[i] = nd(gen) + 1.0;
        ys[i] = nd(gen);
    }
    const auto u = mann_whitney_u(xs, ys);
    CHECK(u.method == TestMethod::NormalApprox);
    CHECK(u.p_value < 0.05);
    CHECK(mann_whitney_u(xs, xs).p_value == doctest::Approx(1.0));
}

TEST_CASE("input errors") {
    const std::vector<double> a{1, 2}, b{1};
    CHECK_THROWS_AS(wilcoxon_signed_rank(a, b), DataError);
    const std::vector<double> none;
    CHECK_THROWS_AS(mann_whitney_u(none, a), DataError);
}

TEST_CASE("FL vs AL over the development table") {
    ComparisonSpec spec;
    spec.name = "FL vs AL";
    spec.factor_a = "FL";
    spec.factor_b = "AL";
    const auto r = compare_models(dev_table(), spec);
    CHECK(r.pairs.size() == 4);
    CHECK(r.result.statistic == 4.0);
    CHECK(r.result.p_value == 0.875);
    CHECK(r.result.method == TestMethod::Exact);
}

TEST_CASE("ALL vs LANG over every stem with both variants") {
    ComparisonSpec spec;
    spec.factor_a = "ALL";
    spec.factor_b = "LANG";
    const auto r = compare_models(dev_table(), spec);
    CHECK(r.pairs.size() == 20);
    CHECK(r.result.p_value >= 0.05);
    CHECK(r.result.p_value <= 0.07);
    CHECK(r.result.statistic == 55.0);
}

TEST_CASE("test-set model comparison") {
    const auto t = test_table();
    std::vector<double> v2, qwen;
    const auto m2 = t.model_index("ModelV2"), mq = t.model_index("Qwen2.5");
    for (std::size_t l = 0; l < t.languages().size(); ++l) {
        if (t.score(m2, l) && t.score(mq, l)) {
            v2.push_back(*t.score(m2, l));
            qwen.push_back(*t.score(mq, l));
        }
    }
    REQUIRE(v2.size() == 24);
    const auto r = wilcoxon_signed_rank(v2, qwen);
    CHECK(r.statistic == 285.0);
    CHECK(r.method == TestMethod::Exact);
    CHECK(r.p_value < 0.001);
    CHECK(win_count(t, "ModelV2", "ModelV1").wins == 25);
}

TEST_CASE("unpaired groups over the development table") {
    ComparisonSpec bge;
    bge.mode = ComparisonSpec::Mode::Unpaired;
    bge.group_a = {"^BGE"};
    const auto r = compare_models(dev_table(), bge);
    CHECK(r.group_a.size() == 10);
    CHECK(r.group_b.size() == 36);
    CHECK(r.result.statistic == 279.0);
    CHECK(r.result.p_value < 0.01);
    REQUIRE(r.rank_sum_a.has_value());
    CHECK(*r.rank_sum_a == 279.0 + 10.0 * 11.0 / 2.0);

    ComparisonSpec prompt = bge;
    prompt.group_a = {"^BGE", "^mE5"};
    const auto p = compare_models(dev_table(), prompt);
    CHECK(p.group_a.size() == 18);
    CHECK(p.result.statistic == 428.0);
}

TEST_CASE("pairing edge cases") {
    const auto t = parse_score_table("model,a,b,c\nx-ALL,1,2,3\nx-LANG,1,2,3\ny-ALL,4,5,6\n");
    ComparisonSpec spec;
    spec.factor_a = "ALL";
    spec.factor_b = "LANG";
    const auto r = compare_models(t, spec);
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0] == std::pair<std::string, std::string>{"x-ALL", "x-LANG"});
    CHECK(r.result.degenerate);
    CHECK(r.result.p_value == 1.0);

    ComparisonSpec self;
    self.pairs = {{"y-ALL", "y-ALL"}};
    CHECK(compare_models(t, self).result.p_value == 1.0);

    ComparisonSpec missing;
    missing.pairs = {{"y-ALL", "nope"}};
    CHECK_THROWS_AS(compare_models(t, missing), DataError);
}

TEST_CASE("comparison specs from JSON") {
    const auto j = nlohmann::json::parse(R"({"comparisons":[
        {"name":"fl","mode":"paired","factor_a":"FL","factor_b":"AL"},
        {"name":"bge","mode":"unpaired","group_a":["^BGE"]}]})");
    const auto specs = comparisons_from_json(j);
    REQUIRE(specs.size() == 2);
    CHECK(specs[0].factor_a == "FL");
    CHECK(specs[1].mode == ComparisonSpec::Mode::Unpaired);
    const auto row = narrative_row(compare_models(dev_table(), specs[0]));
    CHECK(row.find("| fl | wilcoxon |") == 0);
    CHECK(row.find("0.875") != std::string::npos);
}
