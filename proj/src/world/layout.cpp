#include "teamcraft/world/layout.hpp"

#include <set>

#include <json.hpp>

#include "teamcraft/assets.hpp"

namespace teamcraft::world {

namespace {

using nlohmann::json;

std::string with_cell(const std::string& message, const std::optional<Position>& cell) {
  return cell ? message + " at " + to_string(*cell) : message;
}

Position read_xz(const json& j) {
  return Position{j.at("x").get<int>(), j.value("y", 0), j.at("z").get<int>()};
}

bool overlaps(const AreaRect& a, const AreaRect& b) {
  return a.x0 <= b.x1 && b.x0 <= a.x1 && a.z0 <= b.z1 && b.z0 <= a.z1;
}

}  // namespace

LayoutError::LayoutError(const std::string& message, std::optional<Position> cell)
    : std::runtime_error(with_cell(message, cell)), cell_(cell) {}

std::string Layout::kind_at(const Position& p) const {
  const char c = rows.at(static_cast<std::size_t>(p.z)).at(static_cast<std::size_t>(p.x));
  return legend.at(c);
}

Team Layout::area_of(const Position& p) const {
  for (const auto& a : areas) {
    if (a.contains(p)) return a.team;
  }
  return Team::Neutral;
}

const AreaRect* Layout::area(Team team) const {
  for (const auto& a : areas) {
    if (a.team == team) return &a;
  }
  return nullptr;
}

Layout parse_layout(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw LayoutError(std::string("layout is not valid JSON: ") + e.what());
  }
  Layout out;
  try {
    if (!doc.contains("schema_version")) throw LayoutError("layout is missing schema_version");
    out.schema_version = doc.at("schema_version").get<int>();
    out.name = doc.value("name", "");
    for (const auto& [key, value] : doc.at("legend").items()) {
      if (key.size() != 1) throw LayoutError("legend keys must be single characters, got '" + key + "'");
      out.legend[key[0]] = value.get<std::string>();
    }
    out.rows = doc.at("rows").get<std::vector<std::string>>();
    out.depth = static_cast<int>(out.rows.size());
    out.width = out.rows.empty() ? 0 : static_cast<int>(out.rows.front().size());
    if (doc.contains("width") && doc.at("width").get<int>() != out.width) {
      throw LayoutError("declared width does not match rows");
    }
    if (doc.contains("depth") && doc.at("depth").get<int>() != out.depth) {
      throw LayoutError("declared depth does not match rows");
    }
    for (const auto& a : doc.value("areas", json::array())) {
      out.areas.push_back(AreaRect{team_from_string(a.at("team").get<std::string>()), a.at("x0").get<int>(),
                                   a.at("z0").get<int>(), a.at("x1").get<int>(), a.at("z1").get<int>()});
    }
    auto read_agents = [&](const char* key, bool server) {
      for (const auto& a : doc.value(key, json::array())) {
        out.agents.push_back(AgentSpawn{a.at("name").get<std::string>(),
                                        team_from_string(a.at("team").get<std::string>()), read_xz(a), server});
      }
    };
    read_agents("agents", false);
    read_agents("servers", true);
    for (const auto& m : doc.value("mobs", json::array())) {
      out.mobs.push_back(MobSpawn{m.at("kind").get<std::string>(), read_xz(m)});
    }
    for (const auto& c : doc.value("chests", json::array())) {
      ChestSpec spec{read_xz(c), c.value("label", ""), {}};
      const auto items = c.value("items", json::object());
      for (const auto& [item, n] : items.items()) spec.items.add(item, n.get<int>());
      out.chests.push_back(std::move(spec));
    }
    const auto constants = doc.value("constants", json::object());
    for (const auto& [name, per_team] : constants.items()) {
      for (const auto& [team, value] : per_team.items()) {
        out.constants[name][team_from_string(team)] =
            value.is_string() ? value.get<std::string>() : value.dump();
      }
    }
  } catch (const json::exception& e) {
    throw LayoutError(std::string("malformed layout: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw LayoutError(std::string("malformed layout: ") + e.what());
  }
  validate_layout(out);
  return out;
}

void validate_layout(const Layout& layout) {
  if (layout.schema_version != kLayoutSchemaVersion) {
    throw LayoutError("unsupported layout schema_version " + std::to_string(layout.schema_version));
  }
  if (layout.rows.empty() || layout.width == 0) throw LayoutError("layout has no cells");
  for (int z = 0; z < layout.depth; ++z) {
    const auto& row = layout.rows[static_cast<std::size_t>(z)];
    if (static_cast<int>(row.size()) != layout.width) {
      throw LayoutError("ragged row " + std::to_string(z), Position{static_cast<int>(row.size()), 0, z});
    }
    for (int x = 0; x < layout.width; ++x) {
      if (!layout.legend.contains(row[static_cast<std::size_t>(x)])) {
        throw LayoutError(std::string("unknown legend character '") + row[static_cast<std::size_t>(x)] + "'",
                          Position{x, 0, z});
      }
    }
  }
  for (std::size_t i = 0; i < layout.areas.size(); ++i) {
    const auto& a = layout.areas[i];
    if (a.team == Team::Neutral) throw LayoutError("team areas must belong to red or blue");
    if (a.x0 > a.x1 || a.z0 > a.z1) throw LayoutError("empty team area", Position{a.x0, 0, a.z0});
    if (!layout.in_bounds({a.x0, 0, a.z0}) || !layout.in_bounds({a.x1, 0, a.z1})) {
      throw LayoutError("team area outside layout", Position{a.x1, 0, a.z1});
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (overlaps(a, layout.areas[j])) {
        throw LayoutError("overlapping team areas", Position{std::max(a.x0, layout.areas[j].x0), 0,
                                                             std::max(a.z0, layout.areas[j].z0)});
      }
    }
  }
  if (!layout.area(Team::Red) || !layout.area(Team::Blue)) throw LayoutError("layout needs a red and a blue area");
  std::set<std::string> names;
  for (const auto& a : layout.agents) {
    if (!layout.in_bounds(a.position)) throw LayoutError("agent " + a.name + " outside layout", a.position);
    if (a.team == Team::Neutral) throw LayoutError("agent " + a.name + " has no team", a.position);
    if (!names.insert(a.name).second) throw LayoutError("duplicate agent name " + a.name, a.position);
  }
  for (const auto& m : layout.mobs) {
    if (!layout.in_bounds(m.position)) throw LayoutError("mob " + m.kind + " outside layout", m.position);
  }
  for (const auto& c : layout.chests) {
    if (!layout.in_bounds(c.position)) throw LayoutError("chest outside layout", c.position);
    if (layout.kind_at(c.position) != "chest") throw LayoutError("chest contents on a non-chest cell", c.position);
  }
}

Layout load_layout_asset(std::string_view path) {
  auto text = assets::find(path);
  if (!text) throw LayoutError("no layout asset named " + std::string(path));
  return parse_layout(*text);
}

}  // namespace teamcraft::world
