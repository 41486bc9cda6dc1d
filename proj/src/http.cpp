#include "cdtc/http.hpp"

#include <vector>

#include <httplib.h>

namespace cdtc {

using nlohmann::json;

namespace {

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    auto slash = path.find('/');
    auto part = path.substr(0, slash);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash + 1);
  }
  return parts;
}

ApiResponse failure(int status, std::string_view code, const std::string& message) {
  return {status, {{"code", std::string(code)}, {"message", message}}};
}

json parse_body(std::string_view body) {
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw Error(ErrorCode::MalformedRequest, "request body must be a JSON object");
  }
  return parsed;
}

template <typename T>
T field(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end()) {
    throw Error(ErrorCode::MalformedRequest, std::string("missing field '") + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::MalformedRequest, std::string("field '") + key + "' has the wrong type");
  }
}

Submission to_submission(std::string session_id, const json& body) {
  if (auto it = body.find("session_id"); it != body.end() && *it != session_id) {
    throw Error(ErrorCode::MalformedRequest, "session_id in the body does not match the path");
  }
  Submission s;
  s.session_id = std::move(session_id);
  s.item_id = field<std::string>(body, "item_id");
  s.assessment_id = field<std::string>(body, "assessment_id");
  if (!body.contains("response")) {
    throw Error(ErrorCode::MalformedRequest, "missing field 'response'");
  }
  s.response = body.at("response");
  s.elapsed_seconds = field<int>(body, "elapsed_seconds");
  return s;
}

ApiResponse route(Service& service, std::string_view method, std::string_view path,
                  std::string_view body) {
  auto p = split_path(path);
  const bool get = method == "GET";
  const bool post = method == "POST";
  if (p.size() < 2 || p[0] != "api") return failure(404, "NotFound", "no such route");

  if (p[1] == "courses") {
    if (p.size() == 2 && get) return {200, service.list_courses()};
    if (p.size() == 4 && p[3] == "modules" && get) {
      return {200, service.list_modules(std::string(p[2]))};
    }
  } else if (p[1] == "learners" && p.size() == 4) {
    std::string learner(p[2]);
    if (p[3] == "sessions" && post) {
      json request = parse_body(body);
      json started = service.start_session(learner, field<std::string>(request, "course_id"),
                                            field<std::string>(request, "module_id"));
      return {201, std::move(started)};
    }
    if (p[3] == "progress" && get) return {200, service.progress(learner)};
  } else if (p[1] == "sessions" && p.size() == 4) {
    std::string session(p[2]);
    if (p[3] == "next" && get) return {200, service.next(session)};
    if (p[3] == "answer" && post) {
      return {200, service.answer(to_submission(session, parse_body(body)))};
    }
  }
  return failure(404, "NotFound", "no such route: " + std::string(method) + " " +
                                      std::string(path));
}

} // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownCourse:
    case ErrorCode::UnknownModule:
    case ErrorCode::SessionNotFound:
      return 404;
    case ErrorCode::ItemMismatch:
    case ErrorCode::ClockSkew:
      return 409;
    case ErrorCode::ResponseShapeMismatch:
    case ErrorCode::NegativeElapsed:
    case ErrorCode::ElapsedOutOfRange:
    case ErrorCode::InvalidId:
    case ErrorCode::MalformedRequest:
      return 422;
    default:
      return 500;
  }
}

ApiResponse dispatch(Service& service, std::string_view method, std::string_view path,
                     std::string_view body) {
  try {
    return route(service, method, path, body);
  } catch (const Error& e) {
    return failure(http_status(e.code()), to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return failure(500, "InternalError", e.what());
  }
}

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}

  Service& service;
  httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    ApiResponse out = dispatch(impl_->service, req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  auto& server = impl_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

} // namespace cdtc
