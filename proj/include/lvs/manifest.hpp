#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace lvs {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Provenance record written next to every command's outputs.
struct RunManifest {
    std::string command;
    std::string config_hash;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;
    std::string tool_version{kToolVersion};
    double duration_seconds = 0.0;
};

// Stable digest of the effective configuration: FNV-1a over the key=value
// pairs sorted by key. Identical configs hash identically across runs and
// platforms.
std::string config_digest(std::vector<std::pair<std::string, std::string>> kv);

// Serializes to `dir`/manifest.json atomically (temp file + rename).
void write_manifest(const RunManifest& m, const std::filesystem::path& dir);

}  // namespace lvs
