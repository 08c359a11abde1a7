#include "glyphpress/http.hpp"

#include <cmath>

#include "httplib.h"

namespace glyphpress {

std::optional<ParsedUrl> parse_url(const std::string& url) {
  ParsedUrl out;
  std::string rest = url;
  const auto scheme_end = rest.find("://");
  if (scheme_end == std::string::npos) return std::nullopt;
  out.scheme = rest.substr(0, scheme_end);
  if (out.scheme != "http") return std::nullopt;  // TLS endpoints are out of scope
  rest = rest.substr(scheme_end + 3);

  const auto path_start = rest.find('/');
  std::string authority = rest.substr(0, path_start);
  out.path = path_start == std::string::npos ? "/" : rest.substr(path_start);

  const auto colon = authority.rfind(':');
  if (colon == std::string::npos) {
    out.host = authority;
    out.port = 80;
  } else {
    out.host = authority.substr(0, colon);
    try {
      out.port = std::stoi(authority.substr(colon + 1));
    } catch (...) {
      return std::nullopt;
    }
  }
  if (out.host.empty()) return std::nullopt;
  return out;
}

namespace {

httplib::Client make_client(const ParsedUrl& parsed, const Endpoint& endpoint) {
  httplib::Client client(parsed.host, parsed.port);
  const auto whole = std::max(0.05, endpoint.timeout_s);
  const auto sec = static_cast<time_t>(whole);
  const auto usec = static_cast<time_t>((whole - std::floor(whole)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
  if (!endpoint.api_token.empty()) {
    client.set_default_headers({{"Authorization", "Bearer " + endpoint.api_token}});
  }
  return client;
}

}  // namespace

std::optional<std::string> http_post_json(const Endpoint& endpoint, const std::string& body) {
  const auto parsed = parse_url(endpoint.url);
  if (!parsed) return std::nullopt;
  auto client = make_client(*parsed, endpoint);
  auto res = client.Post(parsed->path, body, "application/json");
  if (!res || res->status < 200 || res->status >= 300) return std::nullopt;
  return res->body;
}

bool endpoint_reachable(const Endpoint& endpoint) {
  const auto parsed = parse_url(endpoint.url);
  if (!parsed) return false;
  auto client = make_client(*parsed, endpoint);
  auto res = client.Get("/");
  return static_cast<bool>(res);
}

std::string base64_encode(const unsigned char* data, std::size_t len) {
  static const char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (std::size_t i = 0; i < len; i += 3) {
    const unsigned b0 = data[i];
    const unsigned b1 = i + 1 < len ? data[i + 1] : 0;
    const unsigned b2 = i + 2 < len ? data[i + 2] : 0;
    out.push_back(table[b0 >> 2]);
    out.push_back(table[((b0 & 0x3) << 4) | (b1 >> 4)]);
    out.push_back(i + 1 < len ? table[((b1 & 0xF) << 2) | (b2 >> 6)] : '=');
    out.push_back(i + 2 < len ? table[b2 & 0x3F] : '=');
  }
  return out;
}

}  // namespace glyphpress
