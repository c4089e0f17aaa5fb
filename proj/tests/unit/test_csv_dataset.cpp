#include <doctest.h>

#include <algorithm>

#include "emolab/csv.hpp"
#include "emolab/dataset.hpp"
#include "emolab/error.hpp"
#include "oracles.hpp"

using namespace emolab;

TEST_CASE("csv parse handles quoting, embedded newlines, CRLF and BOM") {
    const auto rows = csv::parse("\xEF\xBB\xBFid,text\r\n1,\"a, \"\"b\"\"\nc\"\r\n\r\n2,plain\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == csv::Row{"id", "text"});
    CHECK(rows[1] == csv::Row{"1", "a, \"b\"\nc"});
    CHECK(rows[2] == csv::Row{"2", "plain"});
}

TEST_CASE("csv rejects malformed quoting") {
    CHECK_THROWS_AS(csv::parse("a,\"unterminated\n"), DataError);
    CHECK_THROWS_AS(csv::parse("a,\"x\"y\n"), DataError);
}

TEST_CASE("csv format_row round-trips awkward fields") {
    const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
    const auto rows = csv::parse(csv::format_row(fields));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == fields);
}

TEST_CASE("dataset header defines the schema in order") {
    const auto ds = parse_dataset("id,text,joy,sadness,anger,surprise,disgust\nr1,\"hello\",1,0,0,1,0\n", "eng");
    CHECK(ds.k() == 5);
    CHECK(ds.schema().emotions() == std::vector<std::string>{"joy", "sadness", "anger", "surprise", "disgust"});
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].id == "r1");
    CHECK(ds[0].text == "hello");
    CHECK(ds[0].labels == std::vector<std::uint8_t>{1, 0, 0, 1, 0});
    CHECK(ds.language() == "eng");
}

TEST_CASE("dataset with header only is valid and empty") {
    const auto ds = parse_dataset("id,text,joy\n", "xx");
    CHECK(ds.size() == 0);
    CHECK(ds.k() == 1);
    const auto counts = label_counts(ds);
    REQUIRE(counts.size() == 1);
    CHECK(counts[0] == LabelCounts{0, 0});
}

TEST_CASE("dataset load errors") {
    CHECK_THROWS_AS(parse_dataset("text,joy\na,1\n", "x"), DataError);
    CHECK_THROWS_AS(parse_dataset("id,joy\na,1\n", "x"), DataError);
    CHECK_THROWS_AS(parse_dataset("id,text\na,b\n", "x"), DataError);
    CHECK_THROWS_AS(parse_dataset("id,text,joy\na,b,2\n", "x"), DataError);
    CHECK_THROWS_AS(parse_dataset("id,text,joy\na,b,yes\n", "x"), DataError);
    CHECK_THROWS_AS(parse_dataset("id,text,joy\na,b,1\na,c,0\n", "x"), DataError);
    CHECK_THROWS_AS(parse_dataset("id,text,Joy\na,b,1\n", "x"), DataError);
    CHECK_THROWS_AS(parse_dataset("id,text,joy,joy\na,b,1,0\n", "x"), DataError);
    CHECK_THROWS_AS(parse_dataset("id,text,joy\na,b\n", "x"), DataError);
    CHECK_THROWS_AS(load_dataset("/nonexistent/file.csv", "x"), DataError);
}

TEST_CASE("label counts") {
    std::vector<Record> records;
    for (int i = 0; i < 10; ++i) records.push_back({"r" + std::to_string(i), "t", {std::uint8_t(i < 3 ? 1 : 0), 0}});
    LabeledDataset ds("x", EmotionSchema({"joy", "fear"}), records);
    auto counts = label_counts(ds);
    CHECK(counts[0] == LabelCounts{3, 7});
    CHECK(counts[1] == LabelCounts{0, 10});

    std::reverse(records.begin(), records.end());
    LabeledDataset reversed("x", EmotionSchema({"joy", "fear"}), records);
    CHECK(label_counts(reversed) == counts);
}

TEST_CASE("dataset CSV round-trip is the identity") {
    std::vector<Record> records{{"a", "comma, \"quoted\"\nnewline", {1, 0}}, {"b", "", {0, 1}}, {"c", "ünïcödé 😊", {1, 1}}};
    LabeledDataset ds("deu", EmotionSchema({"joy", "anger"}), records);
    CHECK(parse_dataset(dataset_to_csv(ds), "deu") == ds);

    const auto synth = synth_dataset("syn", 50, EmotionSchema({"a", "b", "c"}), 0.4, 7);
    const auto dir = oracle::scratch_dir("dataset_roundtrip");
    write_dataset(synth, dir / "s.csv");
    CHECK(load_dataset(dir / "s.csv", "syn") == synth);
}

TEST_CASE("subset keeps the requested order") {
    const auto ds = synth_dataset("x", 5, EmotionSchema({"a"}), 0.5, 1);
    const std::vector<std::size_t> idx{3, 0};
    const auto sub = ds.subset(idx);
    REQUIRE(sub.size() == 2);
    CHECK(sub[0].id == ds[3].id);
    CHECK(sub[1].id == ds[0].id);
}

TEST_CASE("synth_dataset is deterministic and validates its rate") {
    const EmotionSchema schema({"joy", "fear"});
    CHECK(synth_dataset("x", 30, schema, 0.3, 5) == synth_dataset("x", 30, schema, 0.3, 5));
    CHECK_FALSE(synth_dataset("x", 30, schema, 0.3, 5) == synth_dataset("x", 30, schema, 0.3, 6));
    CHECK_THROWS_AS(synth_dataset("x", 3, schema, 1.5, 5), ConfigError);
}

TEST_CASE("prediction files mirror the dataset layout without text") {
    PredictionTable t{{"a", "b"}, EmotionSchema({"joy", "fear"}), BinaryMatrix(2, 2, std::vector<std::uint8_t>{1, 0, 0, 1})};
    const auto text = predictions_to_csv(t);
    CHECK(text == "id,joy,fear\na,1,0\nb,0,1\n");
    const auto back = parse_predictions(text);
    CHECK(back.ids == t.ids);
    CHECK(back.schema == t.schema);
    CHECK(back.labels == t.labels);
    const auto with_text = parse_predictions("id,text,joy,fear\na,hi,1,0\n");
    CHECK(with_text.schema.k() == 2);
}

TEST_CASE("score table from the test-set fixture") {
    const auto t = load_score_table(oracle::source_path("data/fixtures/test_scores.csv"));
    CHECK(t.models() == std::vector<std::string>{"ModelV1", "ModelV2", "Qwen2.5"});
    CHECK(t.languages().size() == 28);
    const auto eng = *t.find_language("eng");
    CHECK(*t.score(t.model_index("ModelV1"), eng) == 72.47);
    const auto qwen = t.model_index("Qwen2.5");
    for (const char* lang : {"amh", "orm", "som", "tir"}) CHECK_FALSE(t.score(qwen, *t.find_language(lang)).has_value());
    std::size_t present = 0;
    for (std::size_t l = 0; l < 28; ++l) present += t.score(qwen, l).has_value();
    CHECK(present == 24);
}

TEST_CASE("score table parsing rules") {
    const auto one = parse_score_table("model,eng\nm,50.5\n");
    CHECK(one.models().size() == 1);
    CHECK(one.languages().size() == 1);
    CHECK(*one.score(0, 0) == 50.5);

    const auto missing = parse_score_table("model,a,b,average\nm,,-,99\n");
    CHECK(missing.languages() == std::vector<std::string>{"a", "b"});
    CHECK_FALSE(missing.score(0, 0).has_value());
    CHECK_FALSE(missing.score(0, 1).has_value());

    CHECK_THROWS_AS(parse_score_table("model,a\nm,abc\n"), DataError);
    CHECK_THROWS_AS(parse_score_table("model,a\nm,1\nm,2\n"), DataError);
    CHECK_THROWS_AS(parse_score_table("model,a\nm,101\n"), DataError);
    CHECK_THROWS_AS(parse_score_table("name,a\nm,1\n"), DataError);
    CHECK_THROWS_AS(one.model_index("nope"), DataError);
}

TEST_CASE("development fixture has 46 models over 28 languages") {
    const auto t = load_score_table(oracle::source_path("data/fixtures/dev_scores.csv"));
    CHECK(t.models().size() == 46);
    CHECK(t.languages().size() == 28);
    CHECK(*t.score(t.model_index("BGEV2-CB-LANG"), *t.find_language("ron")) == 94.17);
}
