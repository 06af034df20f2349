#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpath {

// Configuration problems are user errors, reported with line context and
// mapped to their own exit code by the command-line tool.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plain key-value configuration: `key = value` lines, `#` comments, optional
// `[section]` headers turning keys into `section.key`.  Unknown keys are hard
// errors so typos cannot silently change an experiment.
class Config {
 public:
  static Config parse(const std::string& text, const std::set<std::string>& allowed_keys);
  static Config load(const std::string& path, const std::set<std::string>& allowed_keys);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  std::string require(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

  // Merge a command-line override (validated against the same key set).
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

 private:
  std::map<std::string, std::string> entries_;
};

// Shortest-exact decimal formatting; re-reading the text recovers the bits.
std::string format_double(double x);

// Column-oriented CSV with a header row; all columns must have equal length.
std::string csv_table(const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& columns);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// FNV-1a, used to stamp output manifests with the config they came from.
std::uint64_t fnv1a_hash(const std::string& s);

}  // namespace kpath
