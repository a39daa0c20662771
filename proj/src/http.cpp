#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "assetdb/errors.hpp"
#include "assetdb/http.hpp"

namespace assetdb::http {

namespace {

// Splits "https://host[:port]/path?query" into (scheme://host[:port], /path?query).
std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw IoError("not a URL: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

Response run(const std::string& url, std::chrono::milliseconds timeout,
             const std::function<httplib::Result(httplib::Client&, const std::string&)>& fn) {
    auto [origin, path] = split_url(url);
    httplib::Client client(origin);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
    client.set_follow_location(true);
    auto res = fn(client, path);
    if (!res) throw IoError("request to " + url + " failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
}

}  // namespace

Response get(const std::string& url, std::chrono::milliseconds timeout) {
    return run(url, timeout,
               [](httplib::Client& c, const std::string& path) { return c.Get(path); });
}

Response post_json(const std::string& url, const std::string& json_body,
                   std::chrono::milliseconds timeout) {
    return run(url, timeout, [&](httplib::Client& c, const std::string& path) {
        return c.Post(path, json_body, "application/json");
    });
}

}  // namespace assetdb::http
