#include "dragoncast/config_file.hpp"

#include <fstream>
#include <sstream>

namespace dragoncast {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string msg = "configuration invalid:";
  for (const auto& p : problems) msg += "\n  - " + p;
  return msg;
}

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems_in)
    : std::runtime_error(join_problems(problems_in)),
      problems(std::move(problems_in)) {}

IniDoc IniDoc::parse(const std::string& text) {
  IniDoc doc;
  std::vector<std::string> problems;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t comment = raw.find_first_of("#;");
    std::string line = strip(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        problems.push_back("line " + std::to_string(line_no) + ": malformed section header");
        continue;
      }
      section = strip(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    IniEntry entry{section, strip(line.substr(0, eq)), strip(line.substr(eq + 1)), line_no};
    if (entry.key.empty()) {
      problems.push_back("line " + std::to_string(line_no) + ": empty key");
      continue;
    }
    const std::string full = entry.section + "." + entry.key;
    if (doc.index_.count(full)) {
      problems.push_back("line " + std::to_string(line_no) + ": duplicate key '" + full + "'");
      continue;
    }
    doc.index_[full] = doc.entries_.size();
    doc.entries_.push_back(std::move(entry));
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return doc;
}

std::optional<std::string> IniDoc::get(const std::string& section,
                                       const std::string& key) const {
  auto it = index_.find(section + "." + key);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].value;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace dragoncast
