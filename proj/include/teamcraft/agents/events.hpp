#pragma once

#include <set>
#include <string>
#include <vector>

#include "teamcraft/world/event.hpp"

namespace teamcraft::agents {

using world::Event;

inline constexpr std::size_t kDedupWindow = 64;

// Collapses consecutive repeats of chat-message runs (sender and text), longest
// run first, keeping the first copy; observations that followed a removed chat
// go with it. Runs to a fixpoint.
std::vector<Event> dedup_events(const std::vector<Event>& log, std::size_t window = kDedupWindow);

// Index of the log with the most events; ties go to the lowest index.
std::size_t select_longest_log(const std::vector<std::vector<Event>>& logs);

// Chats plus the observations of `agent`.
std::vector<Event> agent_view(const std::vector<Event>& events, const std::string& agent);

std::string format_seconds(world::Tick tick);
std::string render_chat(const std::vector<Event>& events, std::size_t max_lines = 200);
// Chat lines whose sender is in `senders`.
std::string render_chat_from(const std::vector<Event>& events, const std::set<std::string>& senders,
                             std::size_t max_lines = 200);
// Status, surroundings and inventory from one observation.
std::string render_observation(const world::Observation& obs, std::size_t max_blocks = 40);
// Chat log plus each member's latest surroundings and inventory.
std::string render_team_history(const std::vector<Event>& events, const std::vector<std::string>& members);
// Per member: (message, inventory right after it) pairs.
std::string render_member_pairs(const std::vector<Event>& events, const std::vector<std::string>& members,
                                std::size_t max_pairs = 60);

}  // namespace teamcraft::agents
