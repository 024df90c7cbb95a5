#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

// Run manifest: JSON sidecar emitted next to every output, capturing the
// tool version, the full resolved config, the seed, timestamps, and one
// checksum per emitted file.  Re-running a command with the manifest's config
// and seed reproduces byte-identical CSV (same checksums).

namespace thermoq::sweep {

inline constexpr const char* tool_version = "0.1.0";

struct RunManifest {
    std::string command;
    std::string config_text;  // canonical serialized resolved config
    std::uint64_t master_seed = 0;
    long shots = 0;
    int workers = 1;
    std::string started_utc;
    std::string finished_utc;
    // (file name, "fnv1a64:<16 hex digits>") per output, emission order.
    std::vector<std::pair<std::string, std::string>> outputs;
    std::map<std::string, std::string> notes;
};

std::string utc_now();  // "YYYY-MM-DDThh:mm:ssZ"
std::string checksum_string(std::uint64_t fnv);
void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& path);

}  // namespace thermoq::sweep
