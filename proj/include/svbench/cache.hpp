#pragma once

// Content-addressed result cache.  Keys are SHA-256 digests of (canonical
// complex encoding, operation, parameters); entries carry a version tag and
// are written through a temporary file and an atomic rename.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>
#include <openssl/sha.h>
#include <unistd.h>

#include "svbench/dcomplex.hpp"
#include "svbench/manifold.hpp"

namespace svbench {

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : digest) {
    out += hex[c >> 4];
    out += hex[c & 15];
  }
  return out;
}

inline std::string cache_key(const DeltaComplex& K, const std::string& operation,
                             const nlohmann::json& params) {
  return sha256_hex(canonical_encoding(K) + "\n" + operation + "\n" + params.dump());
}

class Cache {
 public:
  Cache(std::filesystem::path dir, std::string version) : dir_(std::move(dir)), version_(std::move(version)) {}

  const std::filesystem::path& dir() const { return dir_; }
  // Set when the last get met an unreadable entry.
  const std::string& warning() const { return warning_; }

  std::optional<nlohmann::json> get(const std::string& key) {
    warning_.clear();
    std::ifstream in(path(key), std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception&) {
      warning_ = "corrupt cache entry " + key + " ignored";
      return std::nullopt;
    }
    if (!doc.is_object() || !doc.contains("payload") || !doc.contains("version")) {
      warning_ = "malformed cache entry " + key + " ignored";
      return std::nullopt;
    }
    if (doc["version"] != version_) return std::nullopt;
    return doc["payload"];
  }

  void put(const std::string& key, const nlohmann::json& payload) {
    std::filesystem::create_directories(dir_);
    static std::atomic<unsigned> counter{0};
    const auto tmp = dir_ / (key + ".tmp." + std::to_string(::getpid()) + "." +
                             std::to_string(counter++));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cache: cannot write " + tmp.string());
      out << nlohmann::json{{"version", version_}, {"payload", payload}}.dump();
      if (!out) throw Error("cache: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path(key));
  }

 private:
  std::filesystem::path path(const std::string& key) const { return dir_ / (key + ".json"); }

  std::filesystem::path dir_;
  std::string version_;
  std::string warning_;
};

}  // namespace svbench
