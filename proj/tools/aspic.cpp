// aspic: interactive shell for exploring answer set programs.
//
//   aspic ncoloring.lp            load files, then read commands from stdin
//   aspic --serve --port 8080     serve sessions as NDJSON over HTTP
//   aspic --stdio                 serve NDJSON requests on stdin/stdout

#include <unistd.h>

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aspic/service.hpp"
#include "aspic/shell.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Interactive answer set programming shell"};
  std::vector<std::string> files;
  bool serve = false;
  bool stdio = false;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string www;
  app.add_option("files", files, "Programs to load before the first prompt");
  app.add_flag("--serve", serve, "Serve sessions over HTTP instead of reading commands");
  app.add_flag("--stdio", stdio, "Serve NDJSON requests on stdin and stdout");
  app.add_option("--port", port, "HTTP port")->check(CLI::Range(0, 65535));
  app.add_option("--host", host, "HTTP bind address");
  app.add_option("--www", www, "Directory of static files served at /")->check(CLI::ExistingDirectory);
  CLI11_PARSE(app, argc, argv);

  if (serve || stdio) {
    aspic::Service service;
    if (stdio) {
      aspic::serve_stream(service, std::cin, std::cout);
      return 0;
    }
    aspic::HttpServer server(service, www);
    int bound = server.bind(host, port);
    if (bound < 0) {
      std::cerr << "aspic: cannot bind " << host << ":" << port << "\n";
      return 1;
    }
    std::cerr << "aspic: serving on http://" << host << ":" << bound << "\n";
    return server.run() ? 0 : 1;
  }

  aspic::Session session;
  for (const auto& f : files) {
    aspic::Outcome outcome = session.execute(aspic::command::Load{f});
    std::cout << aspic::render(outcome);
  }

  const bool interactive = isatty(STDIN_FILENO) != 0;
  aspic::Repl repl(session);
  while (!repl.finished()) {
    if (interactive) std::cout << repl.prompt() << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) break;
    std::cout << repl.step(line) << std::flush;
  }
  if (interactive && !repl.finished()) std::cout << "\n";
  return 0;
}
