#pragma once

#include <chrono>
#include <string>

namespace assetdb::http {

struct Response {
    int status = 0;
    std::string body;
};

// Thin wrappers over the vendored client so only one TU pays for it.
// Throws IoError on connection failure.
Response get(const std::string& url, std::chrono::milliseconds timeout = std::chrono::seconds(30));

Response post_json(const std::string& url, const std::string& json_body,
                   std::chrono::milliseconds timeout = std::chrono::seconds(30));

}  // namespace assetdb::http
