#include "precip/manifest.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "precip/errors.hpp"

namespace precip {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw InternalError("SHA-256 initialisation failed");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    const auto got = in.gcount();
    if (got > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char pair[3];
    std::snprintf(pair, sizeof pair, "%02x", digest[i]);
    hex += pair;
  }
  return hex;
}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs.push_back(FileDigest{path.string(), sha256_file(path)});
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs.push_back(FileDigest{path.string(), sha256_file(path)});
}

nlohmann::json RunManifest::to_json() const {
  const auto digests = [](const std::vector<FileDigest>& files) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : files) arr.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return arr;
  };
  return {{"command", command},       {"argv", argv},
          {"working_directory", working_directory},
          {"inputs", digests(inputs)}, {"parameters", parameters},
          {"tool_version", tool_version}, {"outputs", digests(outputs)}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.working_directory = j.value("working_directory", std::string());
    m.parameters = j.value("parameters", nlohmann::json::object());
    m.tool_version = j.value("tool_version", std::string());
    for (const auto& f : j.value("inputs", nlohmann::json::array())) {
      m.inputs.push_back(FileDigest{f.at("path"), f.at("sha256")});
    }
    for (const auto& f : j.value("outputs", nlohmann::json::array())) {
      m.outputs.push_back(FileDigest{f.at("path"), f.at("sha256")});
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write manifest '" + path.string() + "'");
  out << to_json().dump(2) << '\n';
}

RunManifest RunManifest::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

}  // namespace precip
