#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace phaselock {

// All recoverable failures carry a short machine-readable code (stable across
// releases, used for CLI exit reporting) plus a human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace phaselock
