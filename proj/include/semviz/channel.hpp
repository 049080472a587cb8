#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semviz/element_ref.hpp"
#include "semviz/engine.hpp"
#include "semviz/rdf.hpp"
#include "semviz/template.hpp"

namespace semviz::channel {

enum class Method { kGet, kPost };
enum class Action { kRenderOutput, kRenderInput };

using Params = std::vector<std::pair<std::string, std::string>>;

struct RenderRequest {
  Method method = Method::kGet;
  Action action = Action::kRenderOutput;
  ElementRef object;
  std::optional<std::string> source;
  std::optional<std::pair<std::string, std::string>> provider;  // (providerID, designID)
  MarkupFormat format = MarkupFormat::kHtml;
  std::optional<std::string> user_profile;
  std::optional<std::string> body;
  std::optional<rdf::Format> body_format;  // from the content type, when it says
  std::optional<rdf::Term> focus;
  std::map<std::string, std::string> fields;  // prop:* form fields
  std::vector<std::string> ignored;           // unknown parameter names
};

// Validates a parameter bundle. The payload is the `data` field, or `body`
// when `content_type` names Turtle or N-Triples. Throws InvalidArgument.
RenderRequest parse_request(Method method, const Params& params,
                            const std::optional<std::string>& body = std::nullopt,
                            std::string_view content_type = {});

struct Response {
  int status = 200;
  std::string content_type;
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
};

std::string_view content_type_for(MarkupFormat format);

// Renders a validated request. Throws semviz::Error; a failure to fetch or
// parse a remote source is reported as NetworkError.
Response handle(const Engine& engine, const RenderRequest& request);

// Output for a data graph already in hand (the CLI renders offline with it).
Response render_output(const Engine& engine, const rdf::Graph& data, const RenderRequest& request);

// parse_request + handle with errors turned into diagnostic pages.
Response serve_render(const Engine& engine, Method method, const Params& params,
                      const std::optional<std::string>& body = std::nullopt,
                      std::string_view content_type = {});

Response serve_metadata(const Engine& engine);
Response serve_describe(const Engine& engine, const Params& params);

int status_for(const std::exception& error);

struct FetchLimits {
  std::chrono::seconds timeout{10};
  std::size_t max_bytes = 10u * 1024 * 1024;
  int max_redirects = 3;
};

// http or https GET. Throws NetworkError on connection failures, non-2xx
// answers, too many redirects and oversize bodies; InvalidArgument for
// other schemes.
std::string fetch_source(const std::string& url, const FetchLimits& limits = {});

// The channel over HTTP/1.1: /render (GET, POST), /metadata, /describe.
class HttpServer {
 public:
  explicit HttpServer(const Engine& engine);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws NetworkError.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace semviz::channel
