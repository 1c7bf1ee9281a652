#include "teamcraft/scenarios/config.hpp"

#include <algorithm>

#include "teamcraft/assets.hpp"

namespace teamcraft::scenarios {

using nlohmann::json;

namespace {

std::vector<DropSpec> parse_drops(const json& j) {
  std::vector<DropSpec> out;
  for (const auto& d : j) {
    DropSpec spec{d.at(0).get<std::string>(), d.at(1).get<int>(), d.at(2).get<int>()};
    if (spec.min < 0 || spec.max < spec.min) throw ConfigError("bad drop range for " + spec.item);
    out.push_back(std::move(spec));
  }
  return out;
}

std::map<std::string, int> parse_counts(const json& j) {
  std::map<std::string, int> out;
  for (const auto& [k, v] : j.items()) out[k] = v.get<int>();
  return out;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

}  // namespace

bool ScenarioConfig::primitive_available(std::string_view name) const {
  return std::find(primitives.begin(), primitives.end(), name) != primitives.end();
}

const CropSpec* ScenarioConfig::crop_by_block(std::string_view block) const {
  for (const auto& c : crops) {
    if (c.block == block) return &c;
  }
  return nullptr;
}

const CropSpec* ScenarioConfig::resolve_crop(std::string_view name) const {
  if (const auto* c = crop_by_block(name)) return c;
  for (const auto& c : crops) {
    if (std::find(c.aliases.begin(), c.aliases.end(), name) != c.aliases.end()) return &c;
  }
  for (const auto& c : crops) {
    if (c.seed == name) return &c;
  }
  return nullptr;
}

std::string ScenarioConfig::objective_for(Team team) const {
  std::string out = objective;
  replace_all(out, "{team}", world::to_string(team));
  return out;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"mushroom_war", "dash_and_dine"};
  return names;
}

DelayDistribution parse_delay(const json& j) {
  if (j.contains("uniform")) {
    const auto& u = j.at("uniform");
    world::UniformDelay d{u.at(0).get<std::int64_t>(), u.at(1).get<std::int64_t>()};
    if (d.lo < 1 || d.hi < d.lo) throw ConfigError("uniform delay bounds must satisfy 1 <= lo <= hi");
    return d;
  }
  if (j.contains("geometric")) {
    const double p = j.at("geometric").get<double>();
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("geometric delay needs 0 < p <= 1");
    return world::GeometricDelay{p};
  }
  throw ConfigError("delay must be {\"uniform\": [lo, hi]} or {\"geometric\": p}");
}

json delay_to_json(const DelayDistribution& d) {
  if (const auto* u = std::get_if<world::UniformDelay>(&d)) return json{{"uniform", {u->lo, u->hi}}};
  return json{{"geometric", std::get<world::GeometricDelay>(d).p}};
}

namespace {

// Member `key` of `doc`, or an empty object when absent.
const json& field(const json& doc, const char* key) {
  static const json empty = json::object();
  auto it = doc.find(key);
  return it == doc.end() ? empty : *it;
}

}  // namespace

json scenario_document(std::string_view name) {
  const auto text = assets::find("scenarios/" + std::string(name) + ".json");
  if (!text) throw ConfigError("unknown scenario '" + std::string(name) + "'");
  return json::parse(*text);
}

ScenarioConfig parse_scenario(const json& doc) {
  ScenarioConfig c;
  try {
    if (doc.value("schema_version", 0) != 1) throw ConfigError("scenario schema_version must be 1");
    c.name = doc.at("name").get<std::string>();
    c.title = doc.value("title", c.name);
    c.description = doc.at("description").get<std::string>();
    c.objective = doc.at("objective").get<std::string>();
    c.duration_ticks = doc.value("duration_ticks", Tick{2400});
    c.wait_ticks = doc.value("wait_ticks", Tick{80});
    c.report_scale = doc.value("report_scale", 1.0);
    c.layout_asset = doc.at("layout").get<std::string>();
    c.layout = world::load_layout_asset(c.layout_asset);
    c.search_radius = doc.value("search_radius", 8);
    c.observe_radius = doc.value("observe_radius", 8);
    c.primitives = doc.at("primitives").get<std::vector<std::string>>();
    const auto scoring = doc.value("scoring", std::string("mushroom"));
    if (scoring == "mushroom") {
      c.scoring = ScoringMode::Mushroom;
    } else if (scoring == "hand_in") {
      c.scoring = ScoringMode::HandIn;
    } else {
      throw ConfigError("unknown scoring mode " + scoring);
    }
    c.mushroom_threshold = doc.value("mushroom_threshold", 7);
    c.max_food_types = doc.value("max_food_types", 3);
    if (doc.contains("costs")) {
      const auto& k = doc.at("costs");
      auto& o = c.costs;
      o.travel_per_cell = k.value("travel_per_cell", o.travel_per_cell);
      o.mine = k.value("mine", o.mine);
      o.craft = k.value("craft", o.craft);
      o.place = k.value("place", o.place);
      o.give = k.value("give", o.give);
      o.chest = k.value("chest", o.chest);
      o.kill = k.value("kill", o.kill);
      o.kill_poll = k.value("kill_poll", o.kill_poll);
      o.farm = k.value("farm", o.farm);
      o.smelt = k.value("smelt", o.smelt);
      o.milk = k.value("milk", o.milk);
      o.say = k.value("say", o.say);
      o.smelt_per_item = k.value("smelt_per_item", o.smelt_per_item);
    }
    for (const auto& [kind, b] : field(doc, "blocks").items()) {
      BlockRule rule;
      rule.drops = parse_drops(b.value("drops", json::array()));
      rule.drops_to_ground = b.value("to_ground", false);
      rule.mushroom = b.value("mushroom", false);
      if (b.contains("regrow")) rule.regrow = parse_delay(b.at("regrow"));
      c.blocks.emplace(kind, std::move(rule));
    }
    for (const auto& j : field(doc, "crops")) {
      CropSpec crop;
      crop.block = j.at("block").get<std::string>();
      crop.aliases = j.value("aliases", std::vector<std::string>{});
      crop.max_stage = j.value("max_stage", 7);
      crop.seed = j.at("seed").get<std::string>();
      crop.harvest_drops = parse_drops(j.at("drops"));
      crop.reset_stage = j.value("reset_stage", -1);
      crop.needs_farmland = j.value("needs_farmland", true);
      if (crop.max_stage < 0 || crop.reset_stage > crop.max_stage) throw ConfigError("bad stages for crop " + crop.block);
      c.crops.push_back(std::move(crop));
    }
    if (doc.contains("crop_advance")) c.crop_advance = parse_delay(doc.at("crop_advance"));
    for (const auto& [mob, drops] : field(doc, "mob_drops").items()) c.mob_drops[mob] = parse_drops(drops);
    if (doc.contains("mob_respawn")) c.mob_respawn = parse_delay(doc.at("mob_respawn"));
    c.placeable = doc.value("placeable", std::vector<std::string>{});
    for (const auto& [item, r] : field(doc, "recipes").items()) {
      Recipe recipe;
      recipe.output = item;
      recipe.output_count = r.value("count", 1);
      recipe.inputs = parse_counts(r.at("inputs"));
      recipe.needs_table = r.value("table", false);
      recipe.needs_furnace = r.value("furnace", false);
      recipe.returns = parse_counts(r.value("returns", json::object()));
      if (recipe.inputs.empty()) throw ConfigError("recipe " + item + " has no inputs");
      if (recipe.needs_furnace && recipe.inputs.size() != 1) {
        throw ConfigError("furnace recipe " + item + " must have exactly one input kind");
      }
      c.recipes.emplace(item, std::move(recipe));
    }
    for (const auto& [item, p] : field(doc, "points").items()) {
      const int v = p.get<int>();
      if (v < 1) throw ConfigError("food points must be >= 1 for " + item);
      c.points.emplace(item, v);
    }
    c.opponents = doc.value("opponents", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario document: ") + e.what());
  }
  if (c.duration_ticks <= 0) throw ConfigError("duration_ticks must be positive");
  if (!(c.report_scale > 0.0)) throw ConfigError("report_scale must be positive");
  return c;
}

ScenarioConfig load_scenario(std::string_view name, const json& overrides) {
  auto doc = scenario_document(name);
  if (!overrides.is_null() && !overrides.empty()) doc.merge_patch(overrides);
  return parse_scenario(doc);
}

const Recipe* recipe_lookup(const RecipeTable& table, std::string_view item) {
  auto it = table.find(item);
  return it == table.end() ? nullptr : &it->second;
}

}  // namespace teamcraft::scenarios
