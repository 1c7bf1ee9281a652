#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "teamcraft/actionlang/ast.hpp"

namespace teamcraft::actionlang {

enum class ArgKind : std::uint8_t { String, Int };

// What an argument refers to; the Random baseline draws values by role.
enum class ArgRole : std::uint8_t { Block, Mob, Item, Player, Teammate, Mode, Crop, Count, Coord, Ticks, Text };

struct ParamSpec {
  std::string name;
  ArgKind kind = ArgKind::String;
  ArgRole role = ArgRole::Text;
  bool optional = false;
  std::vector<std::string> choices;
};

struct PrimitiveSpec {
  std::string name;
  // Row of the control-primitive table this call belongs to.
  std::string category;
  std::string summary;
  std::vector<ParamSpec> params;
  // wait and say are language built-ins, available everywhere.
  bool builtin = false;

  int min_arity() const;
  int max_arity() const { return static_cast<int>(params.size()); }
  std::string signature() const;
};

const std::vector<PrimitiveSpec>& all_primitives();
const PrimitiveSpec* find_primitive(std::string_view name);

class PrimitiveTable {
 public:
  PrimitiveTable() = default;
  // Built-ins are always available in addition to `available`.
  explicit PrimitiveTable(const std::vector<std::string>& available);

  const PrimitiveSpec* find(std::string_view name) const { return find_primitive(name); }
  bool available(std::string_view name) const;
  // Available specs, in canonical order.
  std::vector<const PrimitiveSpec*> specs() const;

 private:
  std::set<std::string, std::less<>> available_;
};

struct Issue {
  SourcePos pos;
  std::string message;
  bool operator==(const Issue&) const = default;
};

std::vector<Issue> validate(const Program& program, const PrimitiveTable& table);
std::vector<Issue> validate_call(const Call& call, const PrimitiveTable& table);

bool valid_item_id(std::string_view id);

// Human-readable language and primitive reference used in prompts.
std::string reference_text(const PrimitiveTable& table);

}  // namespace teamcraft::actionlang
