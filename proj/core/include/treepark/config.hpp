#pragma once

#include <filesystem>
#include <optional>

#include "json.hpp"
#include "treepark/model.hpp"

namespace treepark {

/// Parsed run configuration. The schema is strict: unknown keys anywhere
/// are rejected with ConfigError.
struct LoadedConfig {
  Model model;
  nlohmann::json raw;         // config echo for reports
  nlohmann::json experiment;  // experiment block (object or null)
  std::uint64_t seed = 1;
  int threads = 0;
  std::optional<std::filesystem::path> out_dir;
};

Model model_from_json(const nlohmann::json& spec);
LoadedConfig load_config(const nlohmann::json& root);
LoadedConfig load_config_file(const std::filesystem::path& path);

/// Throws ConfigError if `j` has keys outside `allowed`.
void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                  const char* where);

}  // namespace treepark
