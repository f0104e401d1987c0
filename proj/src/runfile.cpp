#include "phaserec/runfile.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace phaserec {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
  for (size_t i = 0; i < line.size(); ++i)
    if (line[i] == '#' || line[i] == ';') return line.substr(0, i);
  return line;
}

}  // namespace

RunFile RunFile::parse_stream(std::istream& in, const std::string& origin) {
  RunFile rf;
  rf.origin_ = origin;
  std::string line;
  int lineno = 0;
  Section* current = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trim(strip_comment(line));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']')
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": unterminated section header");
      const std::string name = trim(text.substr(1, text.size() - 2));
      if (name.empty())
        throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty section name");
      rf.sections_.push_back({name, {}});
      current = &rf.sections_.back();
      continue;
    }
    const size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value' or '[section]'");
    if (current == nullptr)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": key outside any [section]");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
    current->entries.emplace_back(key, value);
  }
  return rf;
}

RunFile RunFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return parse_stream(in, path);
}

const std::string* RunFile::find(const std::string& section, const std::string& key) const {
  const std::string* hit = nullptr;
  for (const Section& s : sections_) {
    if (s.name != section) continue;
    for (const auto& [k, v] : s.entries)
      if (k == key) hit = &v;
  }
  return hit;
}

bool RunFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string RunFile::get_string(const std::string& section, const std::string& key) const {
  const std::string* v = find(section, key);
  if (v == nullptr)
    throw std::runtime_error("missing required key " + section + "." + key + " in " + origin_);
  return *v;
}

std::string RunFile::get_string_or(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  const std::string* v = find(section, key);
  return v != nullptr ? *v : fallback;
}

double parse_double_value(const std::string& text, const std::string& where) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw std::runtime_error("cannot parse number '" + text + "' for " + where);
  return value;
}

std::vector<double> parse_double_list_value(const std::string& text, const std::string& where) {
  std::vector<double> values;
  std::string token;
  auto flush = [&]() {
    if (!token.empty()) {
      values.push_back(parse_double_value(token, where));
      token.clear();
    }
  };
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
      flush();
    else
      token.push_back(c);
  }
  flush();
  if (values.empty()) throw std::runtime_error("empty number list for " + where);
  return values;
}

double RunFile::get_double(const std::string& section, const std::string& key) const {
  return parse_double_value(get_string(section, key), section + "." + key);
}

double RunFile::get_double_or(const std::string& section, const std::string& key,
                              double fallback) const {
  const std::string* v = find(section, key);
  return v != nullptr ? parse_double_value(*v, section + "." + key) : fallback;
}

int RunFile::get_int(const std::string& section, const std::string& key) const {
  const double d = get_double(section, key);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw std::runtime_error("expected an integer for " + section + "." + key);
  return i;
}

int RunFile::get_int_or(const std::string& section, const std::string& key, int fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t RunFile::get_uint64_or(const std::string& section, const std::string& key,
                                     std::uint64_t fallback) const {
  const std::string* v = find(section, key);
  if (v == nullptr) return fallback;
  const char* begin = v->c_str();
  char* end = nullptr;
  const unsigned long long value = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw std::runtime_error("cannot parse unsigned integer '" + *v + "' for " + section + "." +
                             key);
  return static_cast<std::uint64_t>(value);
}

std::vector<double> RunFile::get_double_list(const std::string& section,
                                             const std::string& key) const {
  return parse_double_list_value(get_string(section, key), section + "." + key);
}

std::vector<std::string> RunFile::get_all(const std::string& section, const std::string& key) const {
  std::vector<std::string> values;
  for (const Section& s : sections_) {
    if (s.name != section) continue;
    for (const auto& [k, v] : s.entries)
      if (k == key) values.push_back(v);
  }
  return values;
}

}  // namespace phaserec
