#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace privbr {

/// Library error with a stable machine-readable code alongside the message.
/// Codes in use: dangling-endpoint, duplicate-edge-id, loss-out-of-range,
/// no-feasible-path, bad-l-bound, l-bound-violated, route-explosion,
/// stream-exhausted, bad-noise-scale, bad-argument, infeasible-alpha, parse.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

} // namespace privbr
