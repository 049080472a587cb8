#include <httplib.h>

#include <algorithm>
#include <cctype>

#include "semviz/channel.hpp"
#include "semviz/errors.hpp"

namespace semviz::channel {

namespace {

struct Url {
  std::string scheme;  // lowercase
  std::string authority;
  std::string target;  // path and query, at least "/"
};

Url split_url(const std::string& url) {
  auto sep = url.find("://");
  if (sep == std::string::npos) throw InvalidArgument("not an absolute URL: " + url);
  Url out;
  out.scheme = url.substr(0, sep);
  std::transform(out.scheme.begin(), out.scheme.end(), out.scheme.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (out.scheme != "http" && out.scheme != "https") {
    throw InvalidArgument("unsupported URL scheme '" + out.scheme + "'");
  }
  auto rest = url.substr(sep + 3);
  auto slash = rest.find_first_of("/?#");
  out.authority = rest.substr(0, slash);
  if (out.authority.empty()) throw InvalidArgument("URL has no host: " + url);
  out.target = slash == std::string::npos ? "/" : rest.substr(slash);
  if (auto hash = out.target.find('#'); hash != std::string::npos) out.target.resize(hash);
  if (out.target.empty() || out.target.front() == '?') out.target.insert(0, "/");
  return out;
}

std::string follow(const Url& from, const std::string& location) {
  if (location.find("://") != std::string::npos) return location;
  std::string origin = from.scheme + "://" + from.authority;
  if (location.starts_with("//")) return from.scheme + ":" + location;
  if (location.starts_with("/")) return origin + location;
  std::string dir = from.target.substr(0, from.target.find('?'));
  dir.resize(dir.rfind('/') + 1);
  return origin + dir + location;
}

}  // namespace

std::string fetch_source(const std::string& url, const FetchLimits& limits) {
  std::string current = url;
  for (int hop = 0;; ++hop) {
    Url parts = split_url(current);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (parts.scheme == "https") throw NetworkError("https is not supported by this build");
#endif
    httplib::Client client(parts.scheme + "://" + parts.authority);
    client.set_connection_timeout(limits.timeout);
    client.set_read_timeout(limits.timeout);
    client.set_write_timeout(limits.timeout);
    client.set_follow_location(false);

    std::string body;
    bool oversize = false;
    auto result = client.Get(parts.target, [&](const char* data, std::size_t n) {
      if (body.size() + n > limits.max_bytes) {
        oversize = true;
        return false;
      }
      body.append(data, n);
      return true;
    });
    if (oversize) {
      throw NetworkError(current + " is larger than " + std::to_string(limits.max_bytes) + " bytes");
    }
    if (!result) {
      throw NetworkError("cannot fetch " + current + ": " + httplib::to_string(result.error()));
    }
    int status = result->status;
    if (status >= 300 && status < 400 && result->has_header("Location")) {
      if (hop >= limits.max_redirects) {
        throw NetworkError(url + " redirects more than " + std::to_string(limits.max_redirects) +
                           " times");
      }
      current = follow(parts, result->get_header_value("Location"));
      continue;
    }
    if (status < 200 || status >= 300) {
      throw NetworkError(current + " answered HTTP " + std::to_string(status));
    }
    return body;
  }
}

}  // namespace semviz::channel
