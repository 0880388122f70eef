#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dragoncast {

// Flat sectioned key-value text:
//   [section]
//   key = value        # trailing comments allowed
// '#' and ';' start comments; blank lines are ignored; keys are unique
// within their section.
struct IniEntry {
  std::string section;
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> problems_in);
  std::vector<std::string> problems;
};

class IniDoc {
 public:
  static IniDoc parse(const std::string& text);  // throws ConfigError

  // nullopt when absent.
  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) const;

  const std::vector<IniEntry>& entries() const { return entries_; }

 private:
  std::vector<IniEntry> entries_;
  std::map<std::string, std::size_t> index_;  // "section.key" -> entries_ pos
};

std::string read_text_file(const std::string& path);   // throws runtime_error
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dragoncast
