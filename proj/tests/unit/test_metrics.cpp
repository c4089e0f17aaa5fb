#include <doctest.h>

#include <cmath>
#include <fstream>

#include "emolab/error.hpp"
#include "emolab/metrics.hpp"
#include "emolab/rng.hpp"
#include "oracles.hpp"

using namespace emolab;

TEST_CASE("hand-checked per-emotion F1") {
    // col 0: tp=2 fp=1 fn=1; col 1: no positives anywhere; col 2: all wrong
    const BinaryMatrix gold(4, 3, {1, 0, 1,  1, 0, 0,  1, 0, 0,  0, 0, 0});
    const BinaryMatrix pred(4, 3, {1, 0, 0,  1, 0, 0,  0, 0, 1,  1, 0, 0});
    const std::vector<std::string> names{"joy", "fear", "anger"};
    const auto r = f1_scores(pred, gold, names, "eng");
    CHECK(r.per_emotion[0].tp == 2);
    CHECK(r.per_emotion[0].fp == 1);
    CHECK(r.per_emotion[0].fn == 1);
    CHECK(r.per_emotion[0].f1 == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
    CHECK(r.per_emotion[1].f1 == 0.0);
    CHECK(r.per_emotion[2].f1 == 0.0);
    CHECK(r.macro_f1 == doctest::Approx(4.0 / 18.0).epsilon(1e-15));
    CHECK(r.language == "eng");
    CHECK(r.n == 4);
    CHECK(markdown_row(r) == "| eng | 22.22 |");
}

TEST_CASE("F1 matches precision/recall harmonic mean on random matrices") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        BinaryMatrix gold(30, 4), pred(30, 4);
        for (std::size_t i = 0; i < 30; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                gold(i, j) = rng.uniform() < 0.3;
                pred(i, j) = rng.uniform() < 0.3;
            }
        const auto r = f1_scores(pred, gold);
        double sum = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            double tp = 0, pp = 0, gp = 0;
            for (std::size_t i = 0; i < 30; ++i) {
                tp += gold(i, j) && pred(i, j);
                pp += pred(i, j);
                gp += gold(i, j);
            }
            const double p = pp ? tp / pp : 0.0, rc = gp ? tp / gp : 0.0;
            const double f = (p + rc) > 0 ? 2 * p * rc / (p + rc) : 0.0;
            CHECK(r.per_emotion[j].f1 == doctest::Approx(f).epsilon(1e-12));
            CHECK(r.per_emotion[j].emotion == "e" + std::to_string(j));
            sum += f;
        }
        CHECK(r.macro_f1 == doctest::Approx(sum / 4).epsilon(1e-12));
    }
}

TEST_CASE("perfect prediction scores 1") {
    const BinaryMatrix gold(3, 2, {1, 0, 0, 1, 1, 1});
    CHECK(f1_scores(gold, gold).macro_f1 == 1.0);
}

TEST_CASE("shape errors") {
    CHECK_THROWS_AS(f1_scores(BinaryMatrix(2, 2), BinaryMatrix(2, 3)), DataError);
    const std::vector<std::string> one{"joy"};
    CHECK_THROWS_AS(f1_scores(BinaryMatrix(2, 2), BinaryMatrix(2, 2), one), DataError);
}

TEST_CASE("report JSON round-trip") {
    const BinaryMatrix gold(3, 2, {1, 0, 0, 1, 1, 1});
    const BinaryMatrix pred(3, 2, {1, 1, 0, 1, 0, 1});
    const auto r = f1_scores(pred, gold, {}, "deu");
    const auto back = report_from_json(nlohmann::json::parse(to_json(r).dump()));
    CHECK(back.language == "deu");
    CHECK(back.macro_f1 == r.macro_f1);
    CHECK(back.per_emotion.size() == 2);
    CHECK(back.per_emotion[1].tp == r.per_emotion[1].tp);
    CHECK_THROWS_AS(report_from_json(nlohmann::json{{"x", 1}}), DataError);
}

TEST_CASE("language average and win count skip missing cells") {
    const auto t = parse_score_table("model,a,b,c\nm1,10,20,-\nm2,12,20,5\n");
    CHECK(language_average(t, "m1") == doctest::Approx(15.0));
    CHECK(language_average(t, "m2") == doctest::Approx(37.0 / 3));
    const auto w = win_count(t, "m2", "m1");
    CHECK(w == WinCount{1, 0, 1});
    CHECK(w.compared() == 2);
    CHECK_THROWS_AS(language_average(t, "nope"), DataError);
    const auto empty = parse_score_table("model,a\nm,-\n");
    CHECK_THROWS_AS(language_average(empty, "m"), DataError);
}

TEST_CASE("development-set averages match the printed column") {
    // The fixture keeps the printed per-model average column; recompute each
    // from the language cells and compare at the printed precision.
    const auto path = oracle::source_path("data/fixtures/dev_scores.csv");
    const auto table = load_score_table(path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    std::string line;
    std::size_t rows = 0, within = 0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const auto last = line.rfind(',');
        const std::string model = line.substr(0, comma);
        const double printed = std::stod(line.substr(last + 1));
        ++rows;
        if (std::fabs(language_average(table, model) - printed) <= 0.015) ++within;
    }
    CHECK(rows == 46);
    CHECK(within == rows);
}
