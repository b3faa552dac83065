#pragma once

#include <stdexcept>
#include <string>

namespace glauberk {

// Invalid cell specification, window request or file content.
struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

// Flip-set catalog or absence-region size above the configured cap.
struct CapError : std::runtime_error {
    explicit CapError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace glauberk
