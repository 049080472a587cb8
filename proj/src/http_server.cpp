#include <httplib.h>

#include "semviz/channel.hpp"
#include "semviz/errors.hpp"

namespace semviz::channel {

namespace {

Params params_of(const httplib::Request& req) {
  Params params(req.params.begin(), req.params.end());
  for (const auto& [name, part] : req.files) params.emplace_back(name, part.content);
  return params;
}

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  for (const auto& [name, value] : r.headers) res.set_header(name, value);
  res.set_content(r.body, r.content_type);
}

}  // namespace

struct HttpServer::Impl {
  explicit Impl(const Engine& e) : engine(e) {}
  const Engine& engine;
  httplib::Server server;
};

HttpServer::HttpServer(const Engine& engine) : impl_(std::make_unique<Impl>(engine)) {
  auto& server = impl_->server;
  const Engine& e = impl_->engine;
  server.set_payload_max_length(FetchLimits{}.max_bytes + 64 * 1024);

  auto render = [&e](const httplib::Request& req, httplib::Response& res) {
    const bool post = req.method == "POST";
    std::string type = req.get_header_value("Content-Type");
    std::optional<std::string> body;
    if (post && !type.starts_with("application/x-www-form-urlencoded") &&
        !type.starts_with("multipart/form-data")) {
      body = req.body;
    }
    reply(res, serve_render(e, post ? Method::kPost : Method::kGet, params_of(req), body, type));
  };
  server.Get("/render", render);
  server.Post("/render", render);
  server.Get("/metadata", [&e](const httplib::Request&, httplib::Response& res) {
    reply(res, serve_metadata(e));
  });
  server.Get("/describe", [&e](const httplib::Request& req, httplib::Response& res) {
    reply(res, serve_describe(e, params_of(req)));
  });
  server.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& ex) {
          what = ex.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(what + "\n", "text/plain; charset=utf-8");
      });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& server = impl_->server;
  if (port == 0) {
    int bound = server.bind_to_any_port(host);
    if (bound < 0) throw NetworkError("cannot bind " + host);
    return bound;
  }
  if (!server.bind_to_port(host, port)) {
    throw NetworkError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace semviz::channel
