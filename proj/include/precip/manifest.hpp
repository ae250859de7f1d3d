#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace precip {

inline constexpr const char* kToolVersion = "0.3.0";

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct FileDigest {
  std::string path;
  std::string sha256;
};

/// Record of one command invocation, written next to its outputs.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;  // full argument vector, for replay
  std::string working_directory;  // relative paths in argv resolve against this
  std::vector<FileDigest> inputs;
  nlohmann::json parameters = nlohmann::json::object();
  std::string tool_version = kToolVersion;
  std::vector<FileDigest> outputs;

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);

  void write(const std::filesystem::path& path) const;
  static RunManifest read(const std::filesystem::path& path);
};

/// Manifest location for a primary output file: "<output>.manifest.json".
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

}  // namespace precip
