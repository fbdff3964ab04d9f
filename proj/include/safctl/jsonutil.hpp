#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "safctl/errors.hpp"

namespace safctl {

// Strict-schema helpers: configuration files with unknown or missing keys are
// rejected instead of silently ignored.

inline void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> required,
                       std::initializer_list<const char*> optional, const std::string& what) {
  if (!obj.is_object()) throw ConfigError(what + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : required) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    for (const char* key : optional) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(what + ": unknown key \"" + it.key() + "\"");
  }
  for (const char* key : required) {
    if (!obj.contains(key)) throw ConfigError(what + ": missing key \"" + key + "\"");
  }
}

inline void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> required,
                       const std::string& what) {
  check_keys(obj, required, {}, what);
}

inline double require_number(const nlohmann::json& obj, const char* key, const std::string& what) {
  const nlohmann::json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(what + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

inline int require_int(const nlohmann::json& obj, const char* key, const std::string& what) {
  const nlohmann::json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(what + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

inline const nlohmann::json& require_array(const nlohmann::json& obj, const char* key,
                                           const std::string& what) {
  const nlohmann::json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(what + ": \"" + key + "\" must be an array");
  return v;
}

}  // namespace safctl
