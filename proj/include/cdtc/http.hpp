#pragma once

#include "cdtc/errors.hpp"
#include "cdtc/service.hpp"

#include <memory>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace cdtc {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// 404 for unknown ids, 409 for ItemMismatch, 422 for malformed requests and
/// responses, 500 otherwise.
int http_status(ErrorCode code);

/// Routes one request under /api. Never throws; failures become
/// {code, message} bodies.
ApiResponse dispatch(Service& service, std::string_view method, std::string_view path,
                     std::string_view body);

/// JSON over HTTP on top of `dispatch`.
class HttpServer {
public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  /// Port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace cdtc
