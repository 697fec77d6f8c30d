#pragma once

#include <json.hpp>

#include <cstddef>
#include <string_view>

namespace catbench::detail {

// Line (1-based) where the value addressed by `ptr` starts in `text`, which
// must be syntactically valid JSON. Falls back to the deepest existing
// ancestor when the pointer does not resolve.
std::size_t line_of_pointer(std::string_view text, const nlohmann::json::json_pointer& ptr);

std::size_t line_of_offset(std::string_view text, std::size_t offset);

} // namespace catbench::detail
