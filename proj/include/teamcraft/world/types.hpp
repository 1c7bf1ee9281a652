#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace teamcraft::world {

using Tick = std::int64_t;
using ItemId = std::string;

// 20 ticks make one simulated second.
inline constexpr Tick kTicksPerSecond = 20;

enum class Team : std::uint8_t { Red, Blue, Neutral };

std::string_view to_string(Team team);
Team team_from_string(std::string_view text);
Team opponent_of(Team team);

struct Position {
  int x = 0;
  int y = 0;
  int z = 0;

  auto operator<=>(const Position&) const = default;
};

std::string to_string(const Position& p);

// Travel metric: one cell per tick in any of the eight planar directions.
int chebyshev(const Position& a, const Position& b);
double euclidean(const Position& a, const Position& b);

class Inventory {
 public:
  using Stacks = std::map<ItemId, int, std::less<>>;

  int count(std::string_view item) const;
  void add(std::string_view item, int n);
  // Removes up to n items and returns how many were removed.
  int remove(std::string_view item, int n);

  bool empty() const { return stacks_.empty(); }
  int total() const;
  int slots_used() const { return static_cast<int>(stacks_.size()); }
  const Stacks& stacks() const { return stacks_; }

  bool operator==(const Inventory&) const = default;

 private:
  Stacks stacks_;
};

}  // namespace teamcraft::world
