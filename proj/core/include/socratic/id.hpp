#pragma once

#include <string>
#include <string_view>

namespace socratic {

/// Random (version 4) UUID in canonical lower-case form.
std::string new_id();
bool is_valid_id(std::string_view id);

}  // namespace socratic
