#include "teamcraft/actionlang/primitives.hpp"

#include <algorithm>

namespace teamcraft::actionlang {

namespace {

ParamSpec str(std::string name, ArgRole role, bool optional = false, std::vector<std::string> choices = {}) {
  return ParamSpec{std::move(name), ArgKind::String, role, optional, std::move(choices)};
}

ParamSpec num(std::string name, ArgRole role, bool optional = false) {
  return ParamSpec{std::move(name), ArgKind::Int, role, optional, {}};
}

std::vector<PrimitiveSpec> build() {
  return {
      {"mineBlock", "mineBlock", "Walk to and break up to count nearest blocks of a kind; collect the drops.",
       {str("kind", ArgRole::Block), num("count", ArgRole::Count, true)}, false},
      {"craftItem", "craftItem", "Craft an item count times from inventory ingredients (some recipes need a crafting_table nearby).",
       {str("item", ArgRole::Item), num("count", ArgRole::Count, true)}, false},
      {"placeItem", "placeItem", "Place a block from the inventory at cell (x, z).",
       {str("item", ArgRole::Item), num("x", ArgRole::Coord), num("z", ArgRole::Coord)}, false},
      {"sendSignal", "multiAgent", "Send a signal to a teammate.", {str("peer", ArgRole::Teammate)}, false},
      {"waitSignal", "multiAgent", "Block until a signal arrives from peer (or \"any\") or timeout ticks pass.",
       {str("peer", ArgRole::Teammate, true), num("timeout", ArgRole::Ticks, true)}, false},
      {"farm", "farm", "Plant, harvest, destroy or convert crops; convert replaces crop with target outside your base.",
       {str("mode", ArgRole::Mode, false, {"plant", "harvest", "destroy", "convert"}), str("crop", ArgRole::Crop),
        str("target", ArgRole::Crop, true)},
       false},
      {"smeltItem", "smeltItem", "Queue count items in a free pre-fueled furnace; each takes 10 seconds.",
       {str("item", ArgRole::Item), str("fuel", ArgRole::Item), num("count", ArgRole::Count, true)}, false},
      {"killMob", "killMob", "Find and slay count mobs of a kind, searching for up to timeout ticks.",
       {str("kind", ArgRole::Mob), num("timeout", ArgRole::Ticks, true), num("count", ArgRole::Count, true)}, false},
      {"giveToPlayer", "giveToPlayer", "Walk to a player and hand over count items (-1 for all).",
       {str("item", ArgRole::Item), str("player", ArgRole::Player), num("count", ArgRole::Count, true)}, false},
      {"useChest", "useChest", "Get items from, deposit items into, or check the chest at (x, z).",
       {str("mode", ArgRole::Mode, false, {"get", "deposit", "check"}), num("x", ArgRole::Coord),
        num("z", ArgRole::Coord), str("item", ArgRole::Item, true), num("count", ArgRole::Count, true)},
       false},
      {"moveTo", "mineflayer", "Walk to cell (x, z).", {num("x", ArgRole::Coord), num("z", ArgRole::Coord)}, false},
      {"milkCow", "mineflayer", "Fill a bucket from the nearest cow.", {}, false},
      {"wait", "builtin", "Do nothing for ticks ticks (20 ticks = 1 second).", {num("ticks", ArgRole::Ticks)}, true},
      {"say", "builtin", "Send a chat message everyone can read.", {str("text", ArgRole::Text)}, true},
  };
}

}  // namespace

int PrimitiveSpec::min_arity() const {
  return static_cast<int>(std::count_if(params.begin(), params.end(), [](const auto& p) { return !p.optional; }));
}

std::string PrimitiveSpec::signature() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    const auto& p = params[i];
    if (p.optional) out += "[";
    out += p.name;
    out += p.kind == ArgKind::String ? ": string" : ": int";
    if (p.optional) out += "]";
  }
  return out + ")";
}

const std::vector<PrimitiveSpec>& all_primitives() {
  static const std::vector<PrimitiveSpec> specs = build();
  return specs;
}

const PrimitiveSpec* find_primitive(std::string_view name) {
  for (const auto& s : all_primitives()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

PrimitiveTable::PrimitiveTable(const std::vector<std::string>& available) : available_(available.begin(), available.end()) {}

bool PrimitiveTable::available(std::string_view name) const {
  const auto* spec = find_primitive(name);
  return spec && (spec->builtin || available_.contains(name));
}

std::vector<const PrimitiveSpec*> PrimitiveTable::specs() const {
  std::vector<const PrimitiveSpec*> out;
  for (const auto& s : all_primitives()) {
    if (available(s.name)) out.push_back(&s);
  }
  return out;
}

bool valid_item_id(std::string_view id) {
  if (id.empty()) return false;
  if (!(id.front() >= 'a' && id.front() <= 'z')) return false;
  return std::all_of(id.begin(), id.end(), [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'; });
}

std::vector<Issue> validate_call(const Call& call, const PrimitiveTable& table) {
  std::vector<Issue> out;
  const auto* spec = table.find(call.name);
  if (!spec) {
    out.push_back({call.pos, "unknown primitive " + call.name});
    return out;
  }
  if (!table.available(call.name)) {
    out.push_back({call.pos, "primitive unavailable: " + call.name});
    return out;
  }
  const int n = static_cast<int>(call.args.size());
  if (n < spec->min_arity() || n > spec->max_arity()) {
    const std::string range = spec->min_arity() == spec->max_arity()
                                  ? std::to_string(spec->max_arity())
                                  : std::to_string(spec->min_arity()) + ".." + std::to_string(spec->max_arity());
    out.push_back({call.pos, "wrong arity: " + call.name + " takes " + range + " arguments, got " + std::to_string(n)});
    return out;
  }
  for (int i = 0; i < n; ++i) {
    const auto& p = spec->params[static_cast<std::size_t>(i)];
    const auto& a = call.args[static_cast<std::size_t>(i)];
    const bool kind_ok = p.kind == ArgKind::String ? a.is_string() : a.is_int();
    if (!kind_ok) {
      out.push_back({a.pos, "argument " + p.name + " of " + call.name + " must be " +
                                (p.kind == ArgKind::String ? "a string" : "an integer")});
      continue;
    }
    if (!p.choices.empty() && std::find(p.choices.begin(), p.choices.end(), a.str()) == p.choices.end()) {
      out.push_back({a.pos, "invalid " + p.name + " '" + a.str() + "' for " + call.name});
    }
  }
  return out;
}

std::vector<Issue> validate(const Program& program, const PrimitiveTable& table) {
  std::vector<Issue> out;
  for (const auto* c : calls(program)) {
    auto issues = validate_call(*c, table);
    out.insert(out.end(), issues.begin(), issues.end());
  }
  return out;
}

std::string reference_text(const PrimitiveTable& table) {
  std::string out =
      "ActScript programs are sequences of statements:\n"
      "  call(args);                      primitive call, arguments are \"strings\" or integers\n"
      "  repeat N { ... }                 run the body N times\n"
      "  loop { ... }                     run the body until the game ends\n"
      "  if has(\"item\", N) { ... } else { ... }   branch on inventory (use `if not has(...)` to negate)\n"
      "  // comment\n"
      "Blocks nest at most 8 deep. Coordinates are grid cells (x, z).\n"
      "Primitives:\n";
  for (const auto* s : table.specs()) out += "  " + s->signature() + "  " + s->summary + "\n";
  return out;
}

}  // namespace teamcraft::actionlang
