#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqkit/errors.hpp"
#include "sqkit/io/csv.hpp"
#include "sqkit/version.hpp"

namespace sqkit {

/// FNV-1a 64-bit over a byte buffer.
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
  const std::uint64_t h = fnv1a64(bytes.data(), bytes.size());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string hash_file(const std::string& path) {
  return fnv1a64_hex(read_text_file(path));
}

/// Provenance record for a CLI run: the command line, every effective
/// parameter, and an FNV-1a content hash of each output file. Re-running the
/// identical command reproduces identical hashes; wall-clock time lives only
/// in the `generated_at` metadata field.
class RunManifest {
 public:
  RunManifest(std::string command_line) : command_line_(std::move(command_line)) {}

  void set_param(const std::string& key, const nlohmann::json& value) { params_[key] = value; }

  /// Records a written file. `key` defaults to the path; commands writing
  /// into a run directory pass a directory-relative key so reruns into
  /// different directories produce identical manifests.
  void add_output(const std::string& path, const std::string& key = "") {
    const std::string bytes = read_text_file(path);
    outputs_[key.empty() ? path : key] = {{"fnv1a64", fnv1a64_hex(bytes)},
                                          {"bytes", bytes.size()}};
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tool"] = {{"name", kToolName}, {"version", kVersion}};
    j["command_line"] = command_line_;
    j["parameters"] = params_;
    j["outputs"] = outputs_;
    j["generated_at"] = timestamp();
    return j;
  }

  void write(const std::string& path) const { write_text_file(path, to_json().dump(2) + "\n"); }

 private:
  static std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
  }

  std::string command_line_;
  nlohmann::json params_ = nlohmann::json::object();
  nlohmann::json outputs_ = nlohmann::json::object();
};

}  // namespace sqkit
