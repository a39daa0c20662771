#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace assetdb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

// Raised when an input document contains bytes that do not decode as UTF-8.
struct EncodingError : Error {
    EncodingError(const std::string& msg, std::size_t offset)
        : Error(msg + " at byte offset " + std::to_string(offset)), offset(offset) {}
    std::size_t offset;
};

struct ConfigError : Error {
    using Error::Error;
};

// Template registry / prompt rendering failures.
struct TemplateError : Error {
    using Error::Error;
};

// Gateway / provider failures (timeouts, HTTP errors, exhausted retries).
struct LlmError : Error {
    using Error::Error;
};

struct StoreError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct SearchError : Error {
    using Error::Error;
};

}  // namespace assetdb
