#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace geowave {

// Flat `key = value` configuration with dotted section keys
// (e.g. manifold.model, kernel.lambda). '#' starts a comment. Later
// assignments win, so CLI overrides are applied by re-setting keys.
class ConfigMap {
 public:
  ConfigMap() = default;

  static ConfigMap from_file(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  // "key=value" fragments, e.g. from trailing CLI arguments.
  void set_from_assignment(const std::string& assignment);

  bool contains(const std::string& key) const;

  // Typed getters with defaults; parse failures raise InvalidArgument naming
  // the key. Every lookup is recorded so the resolved configuration can be
  // echoed into output headers.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;
  std::vector<std::int64_t> get_int_list(const std::string& key,
                                         const std::vector<std::int64_t>& fallback) const;

  // Keys that were never queried (likely typos); call after resolution.
  std::vector<std::string> unused_keys() const;

  // key=value pairs of every key consulted during resolution, defaults
  // included, sorted by key. This is what output headers embed.
  std::vector<std::pair<std::string, std::string>> resolved_entries() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> resolved_;
  mutable std::map<std::string, bool> touched_;
};

}  // namespace geowave
