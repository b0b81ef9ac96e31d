#include "fdlcp/manifest.hpp"

#include <fstream>

namespace fdlcp {

void save_manifest(const std::string& path, const RunManifest& m) {
    nlohmann::json j;
    j["tool_version"] = m.tool_version;
    j["command"] = m.command;
    j["argv"] = m.argv;
    j["config"] = m.config;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open manifest for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing manifest: " + path);
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed manifest " + path + ": " + e.what());
    }
    RunManifest m;
    try {
        m.tool_version = j.at("tool_version").get<std::string>();
        m.command = j.at("command").get<std::string>();
        m.argv = j.at("argv").get<std::vector<std::string>>();
        m.config = j.value("config", nlohmann::json::object());
        m.inputs = j.value("inputs", nlohmann::json::object());
        m.outputs = j.value("outputs", nlohmann::json::object());
    } catch (const nlohmann::json::exception& e) {
        throw IoError("manifest missing fields " + path + ": " + e.what());
    }
    return m;
}

std::string manifest_path_for(const std::string& out_path) {
    return out_path + ".manifest.json";
}

}  // namespace fdlcp
