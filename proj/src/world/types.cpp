#include "teamcraft/world/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace teamcraft::world {

std::string_view to_string(Team team) {
  switch (team) {
    case Team::Red:
      return "red";
    case Team::Blue:
      return "blue";
    case Team::Neutral:
      return "neutral";
  }
  return "neutral";
}

Team team_from_string(std::string_view text) {
  if (text == "red") return Team::Red;
  if (text == "blue") return Team::Blue;
  if (text == "neutral") return Team::Neutral;
  throw std::invalid_argument("unknown team '" + std::string(text) + "'");
}

Team opponent_of(Team team) {
  switch (team) {
    case Team::Red:
      return Team::Blue;
    case Team::Blue:
      return Team::Red;
    case Team::Neutral:
      return Team::Neutral;
  }
  return Team::Neutral;
}

std::string to_string(const Position& p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " + std::to_string(p.z) + ")";
}

int chebyshev(const Position& a, const Position& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

double euclidean(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

int Inventory::count(std::string_view item) const {
  auto it = stacks_.find(item);
  return it == stacks_.end() ? 0 : it->second;
}

void Inventory::add(std::string_view item, int n) {
  if (n < 0) throw std::invalid_argument("negative inventory add");
  if (n == 0) return;
  auto it = stacks_.find(item);
  if (it == stacks_.end()) {
    stacks_.emplace(std::string(item), n);
  } else {
    it->second += n;
  }
}

int Inventory::remove(std::string_view item, int n) {
  if (n <= 0) return 0;
  auto it = stacks_.find(item);
  if (it == stacks_.end()) return 0;
  const int taken = std::min(n, it->second);
  it->second -= taken;
  if (it->second == 0) stacks_.erase(it);
  return taken;
}

int Inventory::total() const {
  int sum = 0;
  for (const auto& [_, n] : stacks_) sum += n;
  return sum;
}

}  // namespace teamcraft::world
