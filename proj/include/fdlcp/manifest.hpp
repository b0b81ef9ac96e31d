#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "fdlcp/common.hpp"

namespace fdlcp {

// Reproducibility record written next to every CLI output as
// "<out>.manifest.json". The verbatim argv allows bit-exact re-execution;
// the config/inputs/outputs maps document the resolved settings.
struct RunManifest {
    std::string tool_version = kToolVersion;
    std::string command;
    std::vector<std::string> argv;  // original tokens, program name excluded
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();
};

void save_manifest(const std::string& path, const RunManifest& m);
RunManifest load_manifest(const std::string& path);

// "<out>.manifest.json"
std::string manifest_path_for(const std::string& out_path);

}  // namespace fdlcp
