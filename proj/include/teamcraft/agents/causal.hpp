#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "teamcraft/actionlang/primitives.hpp"

namespace teamcraft::agents {

struct CausalRelation {
  std::string action;
  std::vector<std::string> causes;
  std::vector<std::string> effects;
  bool operator==(const CausalRelation&) const = default;
};

class CausalParseError : public std::runtime_error {
 public:
  CausalParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// `Action: <call>; Cause: ['a', 'b']; Effect ['c']`
std::string format_relation(const CausalRelation& r);
std::optional<CausalRelation> parse_relation_line(std::string_view line);

// Relations in insertion order, keyed by exact action text. Adding never
// replaces or removes an existing relation.
class CausalGraph {
 public:
  bool add(CausalRelation r);
  // Adds every relation of `other` whose action is new; returns how many.
  std::size_t merge(const CausalGraph& other);
  bool contains(std::string_view action) const { return index_.find(action) != index_.end(); }
  const std::vector<CausalRelation>& relations() const { return relations_; }
  std::size_t size() const { return relations_.size(); }
  bool empty() const { return relations_.empty(); }

  std::string serialize() const;
  // Throws CausalParseError on a malformed non-empty line.
  static CausalGraph parse(std::string_view text);

  bool operator==(const CausalGraph& o) const { return relations_ == o.relations_; }

 private:
  std::vector<CausalRelation> relations_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

CausalGraph graph_union(const CausalGraph& a, const CausalGraph& b);

// True when `action` parses as exactly one ActScript call.
bool is_single_call(std::string_view action);

// Relations from a model response: Appendix-style lines or a JSON array of
// {"action", "causes", "effects"} objects. Actions that are not a single call
// are dropped. nullopt when nothing in the response could be read.
std::optional<std::vector<CausalRelation>> parse_model_relations(const std::string& response);

// Adds an empty relation `name()` for every available primitive no relation
// mentions.
void add_primitive_stubs(CausalGraph& g, const actionlang::PrimitiveTable& table);

}  // namespace teamcraft::agents
