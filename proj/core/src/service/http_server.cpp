#include "fountain/service/http_server.hpp"

#include <httplib.h>

namespace fountain::service {

using nlohmann::json;

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}

  Service& service;
  httplib::Server server;
  std::thread thread;
};

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
}

Response invalid_json(const std::string& what) {
  return {400, error_body(Error(ErrorCode::kInvalidArgument, "request body is not valid JSON: " + what))};
}

template <typename Fn>
void with_json(const httplib::Request& req, httplib::Response& res, Fn&& fn) {
  json body;
  try {
    body = json::parse(req.body);
  } catch (const json::exception& e) {
    reply(res, invalid_json(e.what()));
    return;
  }
  reply(res, fn(body));
}

}  // namespace

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  Service& svc = impl_->service;

  // The library default is SO_REUSEPORT, which lets a second server share the port.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });

  srv.Post("/api/v1/deviations", [&svc](const httplib::Request& req, httplib::Response& res) {
    with_json(req, res, [&](const json& b) { return svc.create_deviation(b); });
  });
  srv.Get(R"(/api/v1/failures/([^/]+)/explanation)",
          [&svc](const httplib::Request& req, httplib::Response& res) {
            std::optional<std::string> deviation;
            if (req.has_param("deviation")) deviation = req.get_param_value("deviation");
            std::optional<std::string_view> view;
            if (deviation) view = *deviation;
            reply(res, svc.explanation(req.matches[1].str(), view));
          });
  srv.Post("/api/v1/feedback", [&svc](const httplib::Request& req, httplib::Response& res) {
    with_json(req, res, [&](const json& b) { return svc.submit_feedback(b); });
  });
  srv.Post("/api/v1/risk-text", [&svc](const httplib::Request& req, httplib::Response& res) {
    with_json(req, res, [&](const json& b) { return svc.risk_text(b); });
  });
  srv.Post(R"(/api/v1/admin/ingest/([a-z]+))",
           [&svc](const httplib::Request& req, httplib::Response& res) {
             const bool orphans = req.has_param("allow_orphans") &&
                                  (req.get_param_value("allow_orphans") == "true" ||
                                   req.get_param_value("allow_orphans") == "1");
             reply(res, svc.ingest(req.matches[1].str(), req.body, orphans));
           });
  srv.Post("/api/v1/admin/snapshot", [&svc](const httplib::Request&, httplib::Response& res) {
    reply(res, svc.snapshot());
  });
  srv.Get("/api/v1/stats/feedback", [&svc](const httplib::Request&, httplib::Response& res) {
    reply(res, svc.feedback_stats());
  });
  srv.Get("/api/v1/health", [&svc](const httplib::Request&, httplib::Response& res) {
    reply(res, svc.health());
  });
  srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const std::string code = res.status == 404 ? "NotFound" : "HttpError";
    res.set_content(json{{"error",
                          {{"code", code},
                           {"message", "no route for " + req.method + " " + req.path},
                           {"details", nullptr}}}}
                        .dump(-1, ' ', false, json::error_handler_t::replace),
                    "application/json");
  });
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "unknown error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(json{{"error", {{"code", "Internal"}, {"message", what}, {"details", nullptr}}}}
                        .dump(-1, ' ', false, json::error_handler_t::replace),
                    "application/json");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& srv = impl_->server;
  int bound = port;
  if (port == 0) {
    bound = srv.bind_to_any_port(host);
  } else if (!srv.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" + std::to_string(port),
                {{"host", host}, {"port", port}});
  }
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

int HttpServer::start(const std::string& host, int port) {
  const int bound = bind(host, port);
  impl_->thread = std::thread([this] { listen(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace fountain::service
