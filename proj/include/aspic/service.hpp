#pragma once

// Session server: shell commands over newline-delimited JSON.
//
// Request:  {"id": "1", "session": "s", "command": "assert edge(1,2)"}
// Response: {"id": "1", "status": "ok", "warnings": [...], "output": [...],
//            "verdict": true, "satisfiability": "SAT", "mode": "enumerate",
//            "models": [["mark(1,1)", ...]], "state-digest": {...}}
//
// The commands "create-session" and "destroy-session" manage sessions.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <json.hpp>

#include "aspic/shell.hpp"

namespace aspic {

class Service {
 public:
  explicit Service(std::filesystem::path working_directory = std::filesystem::current_path());

  nlohmann::json handle_request(const nlohmann::json& request);
  /// One request line in, one response line out (no trailing newline).
  std::string handle_line(std::string_view line);

  bool has_session(const std::string& name) const;

 private:
  struct Slot {
    std::mutex lock;
    Session session;

    explicit Slot(const std::filesystem::path& dir) : session(dir) {}
  };

  std::shared_ptr<Slot> find(const std::string& name) const;

  std::filesystem::path working_directory_;
  mutable std::mutex sessions_lock_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

nlohmann::json digest_json(const SystemState& state);
nlohmann::json outcome_json(const Outcome& outcome);

/// Reads request lines until end of input, answering each in order.
void serve_stream(Service& service, std::istream& in, std::ostream& out);

/// POST /api takes an NDJSON body of requests and answers with NDJSON.
/// Static files under `static_root` are served at "/" when it is set.
class HttpServer {
 public:
  HttpServer(Service& service, const std::filesystem::path& static_root = {});
  ~HttpServer();

  /// Binds to `port`, or to a free port when it is 0. Returns the bound
  /// port, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called.
  bool run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace aspic
