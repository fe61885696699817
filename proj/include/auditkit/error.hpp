#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace auditkit {

// Error with a stable machine-readable code ("RankDeficient", "MissingColumn", ...)
// next to the human-readable message.
class AuditError : public std::runtime_error {
public:
    AuditError(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
    throw AuditError(std::move(code), message);
}

}  // namespace auditkit
