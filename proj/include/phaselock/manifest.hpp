#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace phaselock {

/// FNV-1a over a file's bytes; stable fingerprint for run manifests.
std::uint64_t fnv1a_file(const std::string& path);

/// Record of one CLI invocation: resolved configuration, input hashes and
/// output paths. Re-running a command with an identical manifest must produce
/// byte-identical CSV/JSON outputs.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;
    std::map<std::string, std::string> input_hashes;
    std::vector<std::string> outputs;
    std::string version;

    void add_input(const std::string& path);
    void write(const std::string& path) const;
};

extern const char* const kVersion;

} // namespace phaselock
