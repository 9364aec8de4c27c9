#pragma once

#include <string>
#include <utility>

#include <httplib.h>

#include "vdg/service.hpp"

namespace vdg {

// Binds a GameService to cpp-httplib. Every response carries CORS headers
// for `origin` so a browser client on another port can call the API.
class HttpServer {
 public:
  HttpServer(GameService& service, std::string origin = "*") : service_(service), origin_(std::move(origin)) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      HttpRequest r;
      r.method = req.method;
      r.path = req.path;
      r.body = req.body;
      for (const auto& [key, value] : req.params) r.query.emplace(key, value);
      const HttpResponse out = service_.handle(r);
      res.status = out.status;
      res.set_content(out.body, out.content_type);
      cors(res);
    };
    server_.Get(R"(/.*)", forward);
    server_.Post(R"(/.*)", forward);
    server_.Options(R"(/.*)", [this](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
      cors(res);
    });
  }

  // Binds and returns the port (an ephemeral one when `port` is 0), or -1.
  int bind(const std::string& host, int port) {
    if (port == 0) return server_.bind_to_any_port(host);
    return server_.bind_to_port(host, port) ? port : -1;
  }
  bool run() { return server_.listen_after_bind(); }
  void wait_until_ready() const { server_.wait_until_ready(); }
  void stop() { server_.stop(); }

 private:
  void cors(httplib::Response& res) const {
    res.set_header("Access-Control-Allow-Origin", origin_);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  }

  GameService& service_;
  std::string origin_;
  httplib::Server server_;
};

}  // namespace vdg
