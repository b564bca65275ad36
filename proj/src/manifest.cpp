#include "phaselock/manifest.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "phaselock/errors.hpp"

namespace phaselock {

const char* const kVersion = "0.1.0";

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoFailure", "cannot open " + path + " for hashing");
    std::uint64_t h = 14695981039346656037ull;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    return h;
}

void RunManifest::add_input(const std::string& path) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a_file(path)));
    input_hashes[path] = buf;
}

void RunManifest::write(const std::string& path) const {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config;
    j["inputs"] = input_hashes;
    j["outputs"] = outputs;
    j["version"] = version.empty() ? kVersion : version;
    std::ofstream out(path);
    if (!out) fail("IoFailure", "cannot write manifest " + path);
    out << j.dump(1) << "\n";
}

} // namespace phaselock
