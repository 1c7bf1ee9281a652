#pragma once

#include <map>
#include <optional>
#include <string>

namespace teamcraft::agents {

// Body of the first fenced code block, or the whole trimmed text when the
// response has no fence. nullopt for an empty result.
std::optional<std::string> extract_program(const std::string& response);

// `<program agent="NAME"> ... </program>` blocks by agent name; the first block
// for a name wins.
std::map<std::string, std::string> extract_tagged_programs(const std::string& response);

}  // namespace teamcraft::agents
