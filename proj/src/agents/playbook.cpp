#include <regex>
#include <set>
#include <sstream>

#include "teamcraft/agents/llm.hpp"

namespace teamcraft::agents {

namespace {

using Meta = std::map<std::string, std::string>;

std::string get(const Meta& m, const std::string& key, const std::string& fallback = {}) {
  auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

std::vector<std::string> agents_of(const Meta& m) {
  std::vector<std::string> out;
  std::stringstream in(get(m, "agents"));
  std::string name;
  while (std::getline(in, name, ',')) {
    if (!name.empty()) out.push_back(name);
  }
  while (out.size() < 2) out.push_back("the other player");
  return out;
}

int to_int(const std::string& s, int fallback) {
  try {
    return std::stoi(s);
  } catch (...) {
    return fallback;
  }
}

std::string tagged(const std::vector<std::string>& lines) {
  std::string out = "Reasoning about the scoring rules first.\n<tactics>\n";
  for (std::size_t i = 0; i < lines.size(); ++i) out += std::to_string(i + 1) + ". " + lines[i] + "\n";
  return out + "</tactics>\n";
}

bool mushroom_war(const Meta& m) { return get(m, "scenario") == "mushroom_war"; }

std::string tactics(const Meta& m, bool update) {
  const auto a = agents_of(m);
  std::vector<std::string> lines;
  if (mushroom_war(m)) {
    lines = {a[0] + " keeps the slime in the home area at or below seven blocks by mining it.",
             a[1] + " harvests red mushroom blocks in the home area whenever they are ready.",
             a[1] + " helps " + a[0] + " with slime when no mushrooms are ready."};
    if (update && get(m, "opponent_known") == "1") {
      lines.push_back(a[0] + " checks the home area more often because the opposing team adds slime.");
    }
  } else {
    lines = {a[0] + " harvests sweet berries and hands them to the server.",
             a[1] + " harvests melon slices and hands them to the server.",
             "Both players stay in the home area and avoid the opposing team's farms."};
    if (update && get(m, "opponent_known") == "1") {
      lines.push_back(a[0] + " and " + a[1] + " keep the served food types to the three most valuable ones.");
    }
  }
  return tagged(lines);
}

std::string causal_init(const Meta& m) {
  std::string out = "Here are the relations.\n";
  if (mushroom_war(m)) {
    out +=
        "Action: mineBlock(\"slime_block\", 1); Cause: []; Effect ['slime_block']\n"
        "Action: mineBlock(\"red_mushroom_block\", 1); Cause: []; Effect ['red_mushroom']\n"
        "Action: placeItem(\"slime_block\", 24, 4); Cause: ['slime_block']; Effect []\n"
        "Action: mineBlock(\"slime_block\", 1); Cause: []; Effect ['slime_block']\n"
        "Action: moveTo(24, 4); Cause: []; Effect []\n";
  } else {
    const std::string server = get(m, "const.SERVER", "Red_Server");
    out +=
        "Action: farm(\"harvest\", \"sweet_berry_bush\"); Cause: []; Effect ['sweet_berries']\n"
        "Action: farm(\"harvest\", \"melon_stem\"); Cause: []; Effect ['melon_slice']\n"
        "Action: farm(\"harvest\", \"wheat\"); Cause: []; Effect ['wheat', 'wheat_seeds']\n"
        "Action: craftItem(\"bread\", 1); Cause: ['wheat']; Effect ['bread']\n"
        "Action: smeltItem(\"potato\", \"coal\", 1); Cause: ['potato', 'coal']; Effect ['baked_potato']\n"
        "Action: giveToPlayer(\"sweet_berries\", \"" + server + "\"); Cause: ['sweet_berries']; Effect []\n"
        "Action: craftItem(\"bread\", 1); Cause: ['wheat']; Effect ['bread']\n";
  }
  return out;
}

// New relations read off the feedback lines quoted in the prompt.
std::string causal_update(const ChatRequest& request) {
  const std::string prompt = request.messages.empty() ? std::string() : request.messages.back().content;
  static const std::regex missing(R"(I cannot make (\w+) because I need: ([^"]*))");
  static const std::regex need(R"((\d+) more (\w+))");
  std::set<std::string> seen;
  std::string out;
  for (auto it = std::sregex_iterator(prompt.begin(), prompt.end(), missing); it != std::sregex_iterator(); ++it) {
    const std::string item = (*it)[1].str();
    const std::string needs = (*it)[2].str();
    std::string causes;
    for (auto n = std::sregex_iterator(needs.begin(), needs.end(), need); n != std::sregex_iterator(); ++n) {
      if (!causes.empty()) causes += ", ";
      causes += "'" + (*n)[2].str() + "'";
    }
    const std::string line =
        "Action: craftItem(\"" + item + "\", 1); Cause: [" + causes + "]; Effect ['" + item + "']";
    if (seen.insert(line).second) out += line + "\n";
  }
  if (get(request.meta, "scenario") == "mushroom_war") {
    out += "Action: mineBlock(\"red_mushroom_block\", 2); Cause: []; Effect ['red_mushroom']\n";
  } else {
    out += "Action: farm(\"harvest\", \"potatoes\"); Cause: []; Effect ['potato']\n";
  }
  return out;
}

std::string opponent(const Meta& m) {
  const std::string chat = get(m, "opponent_chat");
  if (chat.empty() || chat.find("(no messages)") != std::string::npos) return "unknown";
  std::vector<std::string> lines;
  auto mentions = [&](const char* word) { return chat.find(word) != std::string::npos; };
  if (mentions("slime")) lines.push_back("One opposing player keeps removing slime from their area.");
  if (mentions("mushroom")) lines.push_back("An opposing player harvests mushrooms.");
  if (mentions("Placed")) lines.push_back("The opposing team places slime in our area.");
  if (mentions("sweet_berr")) lines.push_back("The opposing team serves sweet berries.");
  if (mentions("melon")) lines.push_back("The opposing team serves melon slices.");
  if (mentions("Converted")) lines.push_back("The opposing team converts our farms.");
  if (lines.empty()) return "unknown";
  return tagged(lines);
}

std::string program_for(const Meta& m, int slot, int iteration, bool after_error) {
  if (mushroom_war(m)) {
    if (slot == 0) return "loop {\n  mineBlock(\"slime_block\", 4);\n}\n";
    if (after_error && iteration % 2 == 0) return "mineBlock(\"slime_block\", 2);\nwait(20);\n";
    return "loop {\n  mineBlock(\"red_mushroom_block\", 1);\n}\n";
  }
  const std::string server = get(m, "const.SERVER", "Red_Server");
  if (after_error && iteration % 2 == 0) return "wait(40);\n";
  if (slot == 0) {
    return "loop {\n  farm(\"harvest\", \"sweet_berry_bush\");\n  giveToPlayer(\"sweet_berries\", \"" + server +
           "\");\n}\n";
  }
  return "loop {\n  farm(\"harvest\", \"melon_stem\");\n  giveToPlayer(\"melon_slice\", \"" + server + "\");\n}\n";
}

std::string action(const Meta& m) {
  const int slot = to_int(get(m, "slot"), 0);
  const int iteration = to_int(get(m, "iteration"), 1);
  const bool after_error = iteration > 1;
  return "Following the tactics.\n```actscript\n" + program_for(m, slot, iteration, after_error) + "```\n";
}

std::string critic(const Meta& m) {
  const std::string err = get(m, "last_error");
  const std::string agent = get(m, "agent", "The player");
  if (err.rfind("Error", 0) == 0) {
    return agent + " followed the tactics, but the program stopped: " + err +
           " The next program should give the resource time to come back before retrying.";
  }
  return agent + " followed the tactics and the program finished. Keep the same plan.";
}

std::string cot(const Meta& m) {
  const auto a = agents_of(m);
  std::string out = "Step by step: split the work between the two players.\n";
  for (std::size_t slot = 0; slot < 2; ++slot) {
    out += "<program agent=\"" + a[slot] + "\">\n" + program_for(m, static_cast<int>(slot), 1, false) +
           "</program>\n";
  }
  return out;
}

}  // namespace

std::string playbook_response(const ChatRequest& request, int /*call_index*/) {
  const auto& p = request.purpose;
  const auto& m = request.meta;
  if (p == "tactics_init") return tactics(m, false);
  if (p == "tactics_update") return tactics(m, true);
  if (p == "causal_init") return causal_init(m);
  if (p == "causal_update") return causal_update(request);
  if (p == "opponent") return opponent(m);
  if (p == "action") return action(m);
  if (p == "critic") return critic(m);
  if (p == "cot") return cot(m);
  return "unknown";
}

}  // namespace teamcraft::agents
