#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace phaserec {

/// Plain-text run configuration: "[section]" headers, "key = value" lines,
/// '#' or ';' comments. Repeated keys are kept in order (used for shape
/// lists); scalar lookups take the last occurrence. Missing-key errors name
/// the full "section.key" path.
class RunFile {
 public:
  static RunFile parse_stream(std::istream& in, const std::string& origin = "<config>");
  static RunFile load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;

  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;

  int get_int(const std::string& section, const std::string& key) const;
  int get_int_or(const std::string& section, const std::string& key, int fallback) const;

  std::uint64_t get_uint64_or(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const;

  /// Comma- or whitespace-separated list of numbers.
  std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

  /// All values for a repeated key, in file order.
  std::vector<std::string> get_all(const std::string& section, const std::string& key) const;

 private:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
  };
  std::vector<Section> sections_;
  std::string origin_;

  const std::string* find(const std::string& section, const std::string& key) const;
};

/// Numbers parsed with full range checks; errors name "section.key".
double parse_double_value(const std::string& text, const std::string& where);
std::vector<double> parse_double_list_value(const std::string& text, const std::string& where);

}  // namespace phaserec
