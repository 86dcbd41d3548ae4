#include "aspic/service.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <httplib.h>

namespace aspic {

namespace {

using nlohmann::json;

const char* mode_name(ModeKind mode) {
  switch (mode) {
    case ModeKind::Enumerate: return "enumerate";
    case ModeKind::Union: return "brave";
    case ModeKind::Intersection: return "cautious";
  }
  return "enumerate";
}

json error_response(const json& id, const std::string& message) {
  return {{"id", id}, {"status", "error"}, {"message", message}};
}

}  // namespace

Service::Service(std::filesystem::path working_directory) : working_directory_(std::move(working_directory)) {}

json digest_json(const SystemState& state) {
  StateDigest d = state.digest();
  json released = json::array();
  for (AtomId a : state.released()) released.push_back(state.table().name(a));
  return {{"rules", d.rules},
          {"inputs", d.inputs},
          {"input-true", d.input_true},
          {"input-undefined", d.input_undefined},
          {"assumed-true", d.assumed_true},
          {"assumed-false", d.assumed_false},
          {"released", released}};
}

json outcome_json(const Outcome& outcome) {
  json out;
  out["status"] = outcome.ok() ? "ok" : "error";
  if (outcome.error) out["message"] = *outcome.error;
  out["warnings"] = outcome.warnings;
  out["output"] = outcome.output;
  if (outcome.answer) {
    out["verdict"] = outcome.answer->verdict;
    out["satisfiability"] = outcome.answer->satisfiable ? "SAT" : "UNSAT";
    out["mode"] = mode_name(outcome.answer->mode);
    out["models"] = outcome.answer->models;
  }
  return out;
}

std::shared_ptr<Service::Slot> Service::find(const std::string& name) const {
  std::lock_guard guard(sessions_lock_);
  auto it = sessions_.find(name);
  return it == sessions_.end() ? nullptr : it->second;
}

bool Service::has_session(const std::string& name) const { return find(name) != nullptr; }

json Service::handle_request(const json& request) {
  json id = request.contains("id") ? request["id"] : json();
  if (!request.is_object() || !request.contains("session") || !request["session"].is_string() ||
      !request.contains("command") || !request["command"].is_string()) {
    return error_response(id, "request needs string fields session and command");
  }
  std::string name = request["session"];
  std::string command = request["command"];

  if (command == "create-session") {
    std::lock_guard guard(sessions_lock_);
    if (sessions_.count(name)) return error_response(id, "session " + name + " already exists");
    sessions_.emplace(name, std::make_shared<Slot>(working_directory_));
    return {{"id", id}, {"status", "ok"}};
  }
  if (command == "destroy-session") {
    std::lock_guard guard(sessions_lock_);
    if (!sessions_.erase(name)) return error_response(id, "unknown session " + name);
    return {{"id", id}, {"status", "ok"}};
  }

  std::shared_ptr<Slot> slot = find(name);
  if (!slot) return error_response(id, "unknown session " + name);
  std::lock_guard guard(slot->lock);
  Outcome outcome = slot->session.execute_text(command);
  if (outcome.exit) return error_response(id, "exit is not available over the service; use destroy-session");
  json response = outcome_json(outcome);
  response["id"] = id;
  response["state-digest"] = digest_json(slot->session.state());
  return response;
}

std::string Service::handle_line(std::string_view line) {
  json request = json::parse(line, nullptr, false);
  if (request.is_discarded()) return error_response(json(), "malformed JSON").dump();
  return handle_request(request).dump();
}

void serve_stream(Service& service, std::istream& in, std::ostream& out) {
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out << service.handle_line(line) << '\n' << std::flush;
  }
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(Service& service, const std::filesystem::path& static_root) : impl_(std::make_unique<Impl>()) {
  impl_->server.Post("/api", [&service](const httplib::Request& req, httplib::Response& res) {
    std::istringstream in(req.body);
    std::ostringstream out;
    serve_stream(service, in, out);
    res.set_content(out.str(), "application/x-ndjson");
  });
  if (!static_root.empty()) impl_->server.set_mount_point("/", static_root.string());
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace aspic
