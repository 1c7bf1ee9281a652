#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace teamcraft::agents {

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Prompt templates p_a .. p_h with {{slot}} markers.
class Templates {
 public:
  // Loads the templates shipped in assets/prompts.
  static Templates builtin();

  void set(std::string name, std::string text) { texts_[std::move(name)] = std::move(text); }
  const std::string& text(std::string_view name) const;
  bool has(std::string_view name) const { return texts_.find(name) != texts_.end(); }

  // Fills every slot; throws when the template names a slot missing from `slots`.
  std::string fill(std::string_view name, const std::map<std::string, std::string>& slots) const;

 private:
  std::map<std::string, std::string, std::less<>> texts_;
};

std::vector<std::string> slot_names(std::string_view text);
std::string fill_text(std::string_view text, const std::map<std::string, std::string>& slots);

}  // namespace teamcraft::agents
