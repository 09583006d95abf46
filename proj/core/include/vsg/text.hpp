#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vsg {

std::string to_lower(std::string_view s);

/// Lowercased whitespace tokens with surrounding ASCII punctuation stripped.
/// Tokens that are pure punctuation are dropped.
std::vector<std::string> tokenize(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view separator);

/// The first balanced {...} object in `text`, for model replies wrapped in prose or fences.
std::string extract_json_object(std::string_view text);

}  // namespace vsg
