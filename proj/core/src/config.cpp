#include "geowave/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "geowave/errors.hpp"

namespace geowave {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigMap ConfigMap::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config '" + path.string() + "'");
  }
  ConfigMap config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << path.string() << ":" << line_no << ": expected key = value";
      throw IoError(msg.str());
    }
    config.set(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
  }
  return config;
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  if (key.empty()) {
    throw InvalidArgument("config key must be nonempty");
  }
  values_[key] = value;
}

void ConfigMap::set_from_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw InvalidArgument("override '" + assignment + "' is not of the form key=value");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool ConfigMap::contains(const std::string& key) const { return values_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  touched_[key] = true;
  const auto it = values_.find(key);
  const std::string value = it == values_.end() ? fallback : it->second;
  resolved_[key] = value;
  return value;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  touched_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) {
    std::ostringstream repr;
    repr << fallback;
    resolved_[key] = repr.str();
    return fallback;
  }
  char* end = nullptr;
  const double value = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0') {
    throw InvalidArgument("config key '" + key + "': '" + it->second + "' is not a number");
  }
  resolved_[key] = it->second;
  return value;
}

std::int64_t ConfigMap::get_int(const std::string& key, std::int64_t fallback) const {
  touched_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) {
    resolved_[key] = std::to_string(fallback);
    return fallback;
  }
  try {
    std::size_t used = 0;
    const std::int64_t value = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("");
    resolved_[key] = it->second;
    return value;
  } catch (const std::exception&) {
    throw InvalidArgument("config key '" + key + "': '" + it->second + "' is not an integer");
  }
}

std::uint64_t ConfigMap::get_uint(const std::string& key, std::uint64_t fallback) const {
  const std::int64_t value = get_int(key, static_cast<std::int64_t>(fallback));
  if (value < 0) {
    throw InvalidArgument("config key '" + key + "' must be nonnegative");
  }
  return static_cast<std::uint64_t>(value);
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  touched_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) {
    resolved_[key] = fallback ? "true" : "false";
    return fallback;
  }
  const std::string& v = it->second;
  resolved_[key] = v;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("config key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> ConfigMap::get_double_list(const std::string& key,
                                               const std::vector<double>& fallback) const {
  touched_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) {
    std::ostringstream repr;
    for (std::size_t i = 0; i < fallback.size(); ++i) {
      if (i) repr << ',';
      repr << fallback[i];
    }
    resolved_[key] = repr.str();
    return fallback;
  }
  std::vector<double> values;
  std::stringstream stream(it->second);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const std::string text = trim(item);
    if (text.empty()) continue;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
      throw InvalidArgument("config key '" + key + "': '" + text + "' is not a number");
    }
    values.push_back(value);
  }
  if (values.empty()) {
    throw InvalidArgument("config key '" + key + "': empty list");
  }
  resolved_[key] = it->second;
  return values;
}

std::vector<std::int64_t> ConfigMap::get_int_list(
    const std::string& key, const std::vector<std::int64_t>& fallback) const {
  touched_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) {
    std::ostringstream repr;
    for (std::size_t i = 0; i < fallback.size(); ++i) {
      if (i) repr << ',';
      repr << fallback[i];
    }
    resolved_[key] = repr.str();
    return fallback;
  }
  std::vector<std::int64_t> values;
  std::stringstream stream(it->second);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const std::string text = trim(item);
    if (text.empty()) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stoll(text, &used));
      if (used != text.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw InvalidArgument("config key '" + key + "': '" + text + "' is not an integer");
    }
  }
  if (values.empty()) {
    throw InvalidArgument("config key '" + key + "': empty list");
  }
  resolved_[key] = it->second;
  return values;
}

std::vector<std::string> ConfigMap::unused_keys() const {
  std::vector<std::string> unused;
  for (const auto& [key, value] : values_) {
    if (!touched_.count(key)) unused.push_back(key);
  }
  return unused;
}

std::vector<std::pair<std::string, std::string>> ConfigMap::resolved_entries() const {
  std::vector<std::pair<std::string, std::string>> entries(resolved_.begin(), resolved_.end());
  return entries;
}

}  // namespace geowave
