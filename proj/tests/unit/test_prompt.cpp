#include <doctest.h>

#include <json.hpp>

#include "emolab/csv.hpp"
#include "emolab/error.hpp"
#include "emolab/prompt.hpp"
#include "oracles.hpp"

using namespace emolab;

namespace {
const std::vector<std::string> kFive{"joy", "sadness", "anger", "surprise", "disgust"};

std::size_t occurrences(const std::string& hay, const std::string& needle) {
    if (needle.empty()) return 1;
    std::size_t count = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++count;
    return count;
}
}  // namespace

TEST_CASE("ME5 rendering") {
    CHECK(render_prompt(PromptTemplate::ME5, "I won!", std::nullopt, kFive) ==
          "Instruct: Classify the emotions expressed in the given text snippet by identifying whether each of the "
          "following emotions is present: joy, sadness, anger, surprise, and disgust.\n\nQuery: I won!");
}

TEST_CASE("BGEV2 rendering") {
    CHECK(render_prompt(PromptTemplate::BGEV2, "I won!", "joy", kFive) ==
          "<instruct> Represent this text for identifying the presence of the emotion joy\n<query> I won!");
}

TEST_CASE("BGEV1 with empty input keeps an empty query slot") {
    const auto p = render_prompt(PromptTemplate::BGEV1, "", std::nullopt, kFive);
    CHECK(p == "<instruct> Represent this text for identifying the presence of emotions: joy, sadness, anger, "
               "surprise, and disgust\n<query> ");
}

TEST_CASE("emotion enumeration") {
    CHECK(enumerate_emotions(std::vector<std::string>{"joy"}) == "joy");
    CHECK(enumerate_emotions(std::vector<std::string>{"joy", "fear"}) == "joy and fear");
    CHECK(enumerate_emotions(std::vector<std::string>{"a", "b", "c"}) == "a, b, and c");
}

TEST_CASE("argument errors") {
    CHECK_THROWS_AS(render_prompt(PromptTemplate::BGEV2, "x", std::nullopt, kFive), ConfigError);
    CHECK_THROWS_AS(render_prompt(PromptTemplate::BGEV2, "x", "fear", kFive), ConfigError);
    CHECK_THROWS_AS(render_prompt(PromptTemplate::ME5, "x", "joy", kFive), ConfigError);
    CHECK_THROWS_AS(render_prompt(PromptTemplate::ME5, "x", std::nullopt, {}), ConfigError);
    CHECK_THROWS_AS(parse_template("E5"), ConfigError);
    CHECK(parse_template("bgev2") == PromptTemplate::BGEV2);
    CHECK(requires_emotion(PromptTemplate::BGEV2));
    CHECK_FALSE(requires_emotion(PromptTemplate::ME5));
}

TEST_CASE("input text appears exactly once, even when it looks like a placeholder") {
    for (const std::string text : {"{{INPUT}}", "{{EMOTION}}", "Query: x", "joy", "plain"}) {
        for (auto t : {PromptTemplate::ME5, PromptTemplate::BGEV1}) {
            const auto p = render_prompt(t, text, std::nullopt, std::vector<std::string>{"fear", "anger"});
            CHECK(p.size() >= text.size());
            CHECK(p.compare(p.size() - text.size(), text.size(), text) == 0);
            if (text.find('{') != std::string::npos) CHECK(occurrences(p, text) == 1);
        }
    }
}

TEST_CASE("shared golden prompt file matches byte for byte") {
    const auto golden = nlohmann::json::parse(csv::read_file(oracle::source_path("data/golden/prompts.json")));
    std::size_t checked = 0;
    for (const auto& c : golden.at("cases")) {
        const auto tmpl = parse_template(c.at("template").get<std::string>());
        const auto emotions = c.at("emotions").get<std::vector<std::string>>();
        std::optional<std::string> emotion;
        if (!c.at("emotion").is_null()) emotion = c.at("emotion").get<std::string>();
        std::optional<std::string_view> view;
        if (emotion) view = *emotion;
        const auto text = c.at("text").get<std::string>();
        CAPTURE(text);
        CHECK(render_prompt(tmpl, text, view, emotions) == c.at("prompt").get<std::string>());
        ++checked;
    }
    CHECK(checked == 12);
}
