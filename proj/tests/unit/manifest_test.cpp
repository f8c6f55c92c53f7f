#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "lvs/manifest.hpp"

using namespace lvs;

TEST_CASE("config_digest is stable and key-order independent") {
    auto a = config_digest({{"theta", "0.1"}, {"mode", "fixed"}});
    auto b = config_digest({{"mode", "fixed"}, {"theta", "0.1"}});
    CHECK(a == b);
    CHECK(a.size() == 16);
    CHECK(a != config_digest({{"mode", "fixed"}, {"theta", "0.2"}}));
}

TEST_CASE("write_manifest lands atomically with all fields") {
    auto dir = std::filesystem::temp_directory_path() / "lvs_manifest_test";
    std::filesystem::create_directories(dir);

    RunManifest m;
    m.command = "transform";
    m.config_hash = config_digest({{"theta", "0"}});
    m.inputs = {"in/timeline"};
    m.outputs = {"out/sp.csv"};
    m.seed = 7;
    m.duration_seconds = 0.25;
    write_manifest(m, dir);

    CHECK(!std::filesystem::exists(dir / "manifest.json.tmp"));
    std::ifstream in(dir / "manifest.json");
    auto j = nlohmann::json::parse(in);
    CHECK(j["command"] == "transform");
    CHECK(j["seed"] == 7);
    CHECK(j["tool_version"] == std::string(kToolVersion));
    CHECK(j["outputs"][0] == "out/sp.csv");
    std::filesystem::remove_all(dir);
}
