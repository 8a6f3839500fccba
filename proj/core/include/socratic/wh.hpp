#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace socratic {

/// The five question types offered as columns of the scenario matrix.
enum class WhType { What, Why, How, Who, When };

inline constexpr std::array<WhType, 5> kWhTypes{WhType::What, WhType::Why, WhType::How,
                                                WhType::Who, WhType::When};

std::string_view to_string(WhType wh) noexcept;
std::optional<WhType> parse_wh_type(std::string_view s);

/// The earliest wh-word occurring as a whole word in `sentence` (any case).
std::optional<WhType> find_wh_word(std::string_view sentence);

bool contains_wh_word(std::string_view sentence, WhType wh);

}  // namespace socratic
