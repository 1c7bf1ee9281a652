#include <algorithm>
#include <set>

#include "teamcraft/actionlang/parser.hpp"
#include "teamcraft/opponents/opponents.hpp"

namespace teamcraft::opponents {

namespace {

template <typename T>
const T* pick(world::Rng& rng, const std::vector<T>& pool) {
  if (pool.empty()) return nullptr;
  return &pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
}

std::optional<actionlang::Call> draw_call(world::Rng& rng, const RandomPools& pools,
                                          const std::vector<const actionlang::PrimitiveSpec*>& specs) {
  using actionlang::ArgRole;
  const auto* spec = *pick(rng, specs);
  actionlang::Call call{spec->name, {}, {}};
  const auto* cell = pick(rng, pools.cells);
  int coord = 0;
  const int arity = static_cast<int>(rng.uniform_int(spec->min_arity(), spec->max_arity()));
  for (int i = 0; i < arity; ++i) {
    const auto& p = spec->params[static_cast<std::size_t>(i)];
    const std::string* s = nullptr;
    switch (p.role) {
      case ArgRole::Block:
      case ArgRole::Crop:
        s = pick(rng, pools.blocks);
        break;
      case ArgRole::Mob:
        s = pick(rng, pools.mobs);
        break;
      case ArgRole::Item:
        s = pick(rng, pools.items);
        break;
      case ArgRole::Player:
      case ArgRole::Teammate:
        s = pick(rng, pools.players);
        break;
      case ArgRole::Mode:
        s = pick(rng, p.choices);
        break;
      case ArgRole::Count:
        call.args.push_back({rng.uniform_int(1, 5), {}});
        continue;
      case ArgRole::Ticks:
        call.args.push_back({rng.uniform_int(20, 100), {}});
        continue;
      case ArgRole::Coord:
        if (!cell) return std::nullopt;
        call.args.push_back({std::int64_t{coord++ == 0 ? cell->x : cell->z}, {}});
        continue;
      case ArgRole::Text:
        s = pick(rng, pools.items);
        break;
    }
    if (!s) return std::nullopt;
    call.args.push_back({*s, {}});
  }
  return call;
}

}  // namespace

RandomPools random_pools(const api::Observation& obs) {
  RandomPools pools;
  std::set<std::string> blocks;
  std::set<std::string> mobs;
  std::set<std::string> players;
  for (const auto& b : obs.nearby_blocks) {
    if (b.kind == "air") continue;
    blocks.insert(b.kind);
    pools.cells.push_back(b.position);
  }
  for (const auto& m : obs.nearby_mobs) mobs.insert(m.kind);
  for (const auto& p : obs.nearby_players) players.insert(p.name);
  pools.blocks.assign(blocks.begin(), blocks.end());
  pools.mobs.assign(mobs.begin(), mobs.end());
  pools.players.assign(players.begin(), players.end());
  for (const auto& [item, n] : obs.inventory.stacks()) pools.items.push_back(item);
  return pools;
}

std::string random_program(RandomPolicyState& state, const api::Observation& obs, const actionlang::PrimitiveTable& table) {
  const auto pools = random_pools(obs);
  std::vector<const actionlang::PrimitiveSpec*> specs;
  for (const auto* s : table.specs()) {
    if (!s->builtin) specs.push_back(s);
  }
  std::string source = "wait(20);";
  for (int attempt = 0; attempt < kRandomAttempts && !specs.empty(); ++attempt) {
    auto call = draw_call(state.rng, pools, specs);
    if (!call || !actionlang::validate_call(*call, table).empty()) continue;
    source = actionlang::print(*call) + ";";
    break;
  }
  state.history.push_back(source);
  return source;
}

RandomTeam::RandomTeam(std::uint64_t seed) { state_.rng = world::Rng(seed); }

void RandomTeam::pre_game(const api::PreGameInfo& info) { table_ = actionlang::PrimitiveTable(info.scenario.primitives); }

api::ProgramChoice RandomTeam::next_program(const api::AgentTurn& turn) {
  return {random_program(state_, turn.observation, table_), 0};
}

}  // namespace teamcraft::opponents
