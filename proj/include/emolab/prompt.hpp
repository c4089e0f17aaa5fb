#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace emolab {

// Instruction templates for the prompt-based encoders. ME5 and BGEV1 ask
// about every emotion at once; BGEV2 renders one prompt per (text, emotion).
enum class PromptTemplate { ME5, BGEV1, BGEV2 };

constexpr bool requires_emotion(PromptTemplate t) noexcept { return t == PromptTemplate::BGEV2; }

std::string_view template_name(PromptTemplate t) noexcept;
PromptTemplate parse_template(std::string_view name);

// "a", "a and b", "a, b, and c".
std::string enumerate_emotions(std::span<const std::string> emotions);

// `emotion` must be given iff the template is BGEV2, and must then be one of
// `emotion_list`. Throws ConfigError otherwise.
std::string render_prompt(PromptTemplate tmpl, std::string_view text,
                          std::optional<std::string_view> emotion,
                          std::span<const std::string> emotion_list);

}  // namespace emolab
