#include "teamcraft/agents/events.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace teamcraft::agents {

namespace {

struct Group {
  std::size_t chat = 0;  // index of the chat event in the log
  std::size_t end = 0;   // one past the last attached observation
};

bool same_chat(const Event& a, const Event& b) { return a.sender == b.sender && a.text == b.text; }

// One pass at a fixed period; returns true when something was removed.
bool collapse_period(const std::vector<Event>& log, std::vector<Group>& groups, std::size_t period) {
  bool changed = false;
  std::size_t i = 0;
  while (i + 2 * period <= groups.size()) {
    bool repeat = true;
    for (std::size_t k = 0; k < period && repeat; ++k) {
      repeat = same_chat(log[groups[i + k].chat], log[groups[i + period + k].chat]);
    }
    if (repeat) {
      groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(i + period),
                   groups.begin() + static_cast<std::ptrdiff_t>(i + 2 * period));
      changed = true;
    } else {
      ++i;
    }
  }
  return changed;
}

std::string inventory_text(const world::Inventory& inv) {
  if (inv.empty()) return "empty";
  std::string out;
  for (const auto& [item, n] : inv.stacks()) {
    if (!out.empty()) out += ", ";
    out += item + " x" + std::to_string(n);
  }
  return out;
}

const world::Observation* latest_observation(const std::vector<Event>& events, const std::string& agent) {
  for (auto it = events.rbegin(); it != events.rend(); ++it) {
    if (it->kind == world::EventKind::Observe && it->observation && it->observation->agent == agent) {
      return &*it->observation;
    }
  }
  return nullptr;
}

std::string chat_line(const Event& e) { return "[" + format_seconds(e.tick) + "] " + e.sender + ": " + e.text; }

std::string tail_lines(const std::vector<std::string>& lines, std::size_t max_lines) {
  std::string out;
  const std::size_t start = lines.size() > max_lines ? lines.size() - max_lines : 0;
  if (start > 0) out += "(" + std::to_string(start) + " earlier messages omitted)\n";
  for (std::size_t i = start; i < lines.size(); ++i) out += lines[i] + "\n";
  return out.empty() ? "(no messages)\n" : out;
}

}  // namespace

std::vector<Event> dedup_events(const std::vector<Event>& log, std::size_t window) {
  std::vector<Group> groups;
  std::size_t lead = 0;
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log[i].kind == world::EventKind::Chat) {
      groups.push_back(Group{i, i + 1});
    } else if (groups.empty()) {
      lead = i + 1;
    } else {
      groups.back().end = i + 1;
    }
  }
  const std::size_t max_period = std::max<std::size_t>(window / 2, 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t p = std::min(max_period, groups.size() / 2); p >= 1 && !changed; --p) {
      changed = collapse_period(log, groups, p);
    }
  }
  std::vector<Event> out(log.begin(), log.begin() + static_cast<std::ptrdiff_t>(lead));
  for (const auto& g : groups) {
    out.insert(out.end(), log.begin() + static_cast<std::ptrdiff_t>(g.chat),
               log.begin() + static_cast<std::ptrdiff_t>(g.end));
  }
  return out;
}

std::size_t select_longest_log(const std::vector<std::vector<Event>>& logs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < logs.size(); ++i) {
    if (logs[i].size() > logs[best].size()) best = i;
  }
  return best;
}

std::vector<Event> agent_view(const std::vector<Event>& events, const std::string& agent) {
  std::vector<Event> out;
  for (const auto& e : events) {
    if (e.kind == world::EventKind::Chat || (e.observation && e.observation->agent == agent)) out.push_back(e);
  }
  return out;
}

std::string format_seconds(world::Tick tick) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", static_cast<double>(tick) / 20.0);
  return buf;
}

std::string render_chat(const std::vector<Event>& events, std::size_t max_lines) {
  std::vector<std::string> lines;
  for (const auto& e : events) {
    if (e.kind == world::EventKind::Chat) lines.push_back(chat_line(e));
  }
  return tail_lines(lines, max_lines);
}

std::string render_chat_from(const std::vector<Event>& events, const std::set<std::string>& senders,
                             std::size_t max_lines) {
  std::vector<std::string> lines;
  for (const auto& e : events) {
    if (e.kind == world::EventKind::Chat && senders.count(e.sender)) lines.push_back(chat_line(e));
  }
  return tail_lines(lines, max_lines);
}

std::string render_observation(const world::Observation& obs, std::size_t max_blocks) {
  const auto& s = obs.self_status;
  std::string out;
  out += "Biome: " + s.biome + "\n";
  out += "Time: " + format_seconds(s.time) + "\n";
  out += "Health: " + std::to_string(s.health) + "/20\n";
  out += "Hunger: " + std::to_string(s.hunger) + "/20\n";
  out += "Position: " + world::to_string(s.position) + "\n";
  out += "Equipment: " + (s.equipment.empty() ? std::string("none") : s.equipment) + "\n";

  std::map<std::string, std::pair<int, world::Position>> kinds;
  for (const auto& b : obs.nearby_blocks) {
    auto [it, fresh] = kinds.try_emplace(b.kind, 0, b.position);
    ++it->second.first;
  }
  out += "Nearby blocks:";
  if (kinds.empty()) out += " none";
  std::size_t shown = 0;
  for (const auto& [kind, info] : kinds) {
    if (shown++ == max_blocks) {
      out += "\n  ...";
      break;
    }
    out += "\n  " + kind + " x" + std::to_string(info.first) + " (one at " + world::to_string(info.second) + ")";
  }
  out += "\n";

  out += "Nearby entities:";
  bool any = false;
  for (const auto& m : obs.nearby_mobs) {
    out += "\n  " + m.kind + " at " + world::to_string(m.position);
    any = true;
  }
  for (const auto& p : obs.nearby_players) {
    out += "\n  player " + p.name + " (" + std::string(world::to_string(p.team)) + ") at " + world::to_string(p.position);
    any = true;
  }
  for (const auto& i : obs.nearby_items) {
    out += "\n  dropped " + i.item + " x" + std::to_string(i.count) + " at " + world::to_string(i.position);
    any = true;
  }
  if (!any) out += " none";
  out += "\n";
  out += "Inventory: " + inventory_text(obs.inventory) + "\n";
  return out;
}

std::string render_team_history(const std::vector<Event>& events, const std::vector<std::string>& members) {
  std::string out = "Chat log:\n" + render_chat(events);
  for (const auto& m : members) {
    out += "\n" + m + ":\n";
    if (const auto* obs = latest_observation(events, m)) {
      out += render_observation(*obs);
    } else {
      out += "(no observation)\n";
    }
  }
  return out;
}

std::string render_member_pairs(const std::vector<Event>& events, const std::vector<std::string>& members,
                                std::size_t max_pairs) {
  std::string out;
  for (const auto& m : members) {
    std::vector<std::string> pairs;
    world::Inventory inv;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const auto& e = events[i];
      if (e.kind == world::EventKind::Observe && e.observation && e.observation->agent == m) {
        inv = e.observation->inventory;
      }
      if (e.kind != world::EventKind::Chat || e.sender != m) continue;
      for (std::size_t j = i + 1; j < events.size(); ++j) {
        const auto& next = events[j];
        if (next.kind == world::EventKind::Observe && next.observation && next.observation->agent == m) {
          inv = next.observation->inventory;
          break;
        }
        if (next.kind == world::EventKind::Chat && next.sender == m) break;
      }
      pairs.push_back("(\"" + e.text + "\", {" + inventory_text(inv) + "})");
    }
    out += m + ":\n";
    if (pairs.empty()) out += "  (no messages)\n";
    const std::size_t start = pairs.size() > max_pairs ? pairs.size() - max_pairs : 0;
    for (std::size_t i = start; i < pairs.size(); ++i) out += "  " + pairs[i] + "\n";
  }
  return out;
}

}  // namespace teamcraft::agents
