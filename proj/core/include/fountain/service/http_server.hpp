#pragma once

#include <memory>
#include <string>
#include <thread>

#include "fountain/service/service.hpp"

namespace fountain::service {

// /api/v1 routes over a Service. Bodies and responses are UTF-8 JSON, except
// the CSV bodies of the admin ingest endpoints.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Returns the bound port (an ephemeral one when `port` is 0). Throws
  // kIoError when the address cannot be bound.
  int bind(const std::string& host, int port);
  // Serves until stop(); call after bind().
  void listen();
  // bind() + listen() on a background thread; returns the bound port.
  int start(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fountain::service
