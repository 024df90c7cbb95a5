#include "sweep/manifest.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include "json.hpp"
#include "sweep/config.hpp"

namespace thermoq::sweep {

std::string utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string checksum_string(std::uint64_t fnv) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  (unsigned long long)fnv);
    return buf;
}

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& path) {
    nlohmann::json j;
    j["tool_version"] = tool_version;
    j["command"] = manifest.command;
    j["config"] = manifest.config_text;
    j["master_seed"] = manifest.master_seed;
    j["shots"] = manifest.shots;
    j["workers"] = manifest.workers;
    j["started_utc"] = manifest.started_utc;
    j["finished_utc"] = manifest.finished_utc;
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& [file, sum] : manifest.outputs)
        outs.push_back({{"file", file}, {"checksum", sum}});
    j["outputs"] = outs;
    if (!manifest.notes.empty()) {
        nlohmann::json notes = nlohmann::json::object();
        for (const auto& [k, v] : manifest.notes) notes[k] = v;
        j["notes"] = notes;
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << "\n";
    out.flush();
    if (!out) throw IoError("write failure on '" + path.string() + "'");
}

}  // namespace thermoq::sweep
