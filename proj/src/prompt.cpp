#include "emolab/prompt.hpp"

#include <algorithm>

#include "emolab/error.hpp"

namespace emolab {

std::string_view template_name(PromptTemplate t) noexcept {
    switch (t) {
        case PromptTemplate::ME5: return "ME5";
        case PromptTemplate::BGEV1: return "BGEV1";
        case PromptTemplate::BGEV2: return "BGEV2";
    }
    return "?";
}

PromptTemplate parse_template(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "ME5") return PromptTemplate::ME5;
    if (upper == "BGEV1") return PromptTemplate::BGEV1;
    if (upper == "BGEV2") return PromptTemplate::BGEV2;
    throw ConfigError("unknown prompt template: '" + std::string(name) + "'");
}

std::string enumerate_emotions(std::span<const std::string> emotions) {
    std::string out;
    const auto n = emotions.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            if (n == 2) out += " and ";
            else if (i + 1 == n) out += ", and ";
            else out += ", ";
        }
        out += emotions[i];
    }
    return out;
}

std::string render_prompt(PromptTemplate tmpl, std::string_view text,
                          std::optional<std::string_view> emotion,
                          std::span<const std::string> emotion_list) {
    if (emotion_list.empty()) throw ConfigError("prompt: emotion list is empty");
    if (requires_emotion(tmpl) != emotion.has_value()) {
        throw ConfigError(std::string("prompt: template ") + std::string(template_name(tmpl)) +
                          (emotion ? " takes no emotion" : " requires an emotion"));
    }
    if (emotion &&
        std::find(emotion_list.begin(), emotion_list.end(), *emotion) == emotion_list.end()) {
        throw ConfigError("prompt: emotion '" + std::string(*emotion) + "' is not in the emotion list");
    }

    std::string out;
    switch (tmpl) {
        case PromptTemplate::ME5:
            out = "Instruct: Classify the emotions expressed in the given text snippet by "
                  "identifying whether each of the following emotions is present: ";
            out += enumerate_emotions(emotion_list);
            out += ".\n\nQuery: ";
            break;
        case PromptTemplate::BGEV1:
            out = "<instruct> Represent this text for identifying the presence of emotions: ";
            out += enumerate_emotions(emotion_list);
            out += "\n<query> ";
            break;
        case PromptTemplate::BGEV2:
            out = "<instruct> Represent this text for identifying the presence of the emotion ";
            out += *emotion;
            out += "\n<query> ";
            break;
    }
    // Appended last so the text itself is never scanned for placeholders.
    out += text;
    return out;
}

}  // namespace emolab
