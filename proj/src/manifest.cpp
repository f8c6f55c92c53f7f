#include "lvs/manifest.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "lvs/error.hpp"

namespace lvs {

std::string config_digest(std::vector<std::pair<std::string, std::string>> kv) {
    std::sort(kv.begin(), kv.end());
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001B3ULL;
        }
    };
    for (const auto& [k, v] : kv) {
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& dir) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["config_hash"] = m.config_hash;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["seed"] = m.seed;
    j["tool_version"] = m.tool_version;
    j["duration_seconds"] = m.duration_seconds;

    const auto tmp = dir / "manifest.json.tmp";
    const auto final_path = dir / "manifest.json";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << j.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, final_path);
}

}  // namespace lvs
