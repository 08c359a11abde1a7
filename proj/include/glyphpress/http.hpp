#pragma once

#include <optional>
#include <string>

namespace glyphpress {

// Remote endpoint shared by the model, judge, and critic clients. Timeouts
// are mandatory so the search loop can never block indefinitely.
struct Endpoint {
  std::string url;        // http://host:port/path
  std::string api_token;  // sent as a bearer token when nonempty
  double timeout_s = 10.0;
};

struct ParsedUrl {
  std::string scheme;
  std::string host;
  int port = 80;
  std::string path;
};

std::optional<ParsedUrl> parse_url(const std::string& url);

// POST with a JSON body; nullopt on connection error, timeout, or non-2xx.
std::optional<std::string> http_post_json(const Endpoint& endpoint, const std::string& body);

// Cheap reachability probe (TCP connect + HTTP round trip, any status).
bool endpoint_reachable(const Endpoint& endpoint);

std::string base64_encode(const unsigned char* data, std::size_t len);

}  // namespace glyphpress
