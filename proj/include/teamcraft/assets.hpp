#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Read-only access to the text assets compiled into the library
// (layouts, scenario documents, opponent scripts, prompt templates).
namespace teamcraft::assets {

std::optional<std::string_view> find(std::string_view path);

// Paths beginning with `prefix`, in lexical order.
std::vector<std::string_view> list(std::string_view prefix);

}  // namespace teamcraft::assets
