#pragma once

// Interactive session: command execution against a system state, option
// handling, and text rendering for the "?- " prompt loop.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aspic/query.hpp"
#include "aspic/state.hpp"
#include "aspic/syntax.hpp"

namespace aspic {

struct SessionOptions {
  std::size_t model_limit = 1;  // -n, 0 enumerates all
  ModeKind mode = ModeKind::Enumerate;

  friend bool operator==(const SessionOptions&, const SessionOptions&) = default;
};

/// A query answer with atoms spelled out in the program grammar.
struct AnswerView {
  bool verdict = false;
  bool satisfiable = false;
  ModeKind mode = ModeKind::Enumerate;
  std::vector<std::vector<std::string>> models;

  friend bool operator==(const AnswerView&, const AnswerView&) = default;
};

/// Structured result of one command; rendering turns it into text.
struct Outcome {
  std::vector<std::string> output;
  std::vector<std::string> warnings;
  std::optional<std::string> error;
  std::optional<AnswerView> answer;
  bool exit = false;

  bool ok() const { return !error; }
};

class Session {
 public:
  explicit Session(std::filesystem::path working_directory = std::filesystem::current_path());

  /// Runs one command. A failing command leaves state and options untouched.
  Outcome execute(const Command& command);
  /// Parses and runs complete command text; an unterminated define is an error.
  Outcome execute_text(std::string_view text);

  const SystemState& state() const { return state_; }
  const SessionOptions& options() const { return options_; }

 private:
  SystemState state_;
  SessionOptions options_;
  std::filesystem::path working_directory_;
};

std::string render(const Outcome& outcome);
std::string render_answer(const AnswerView& answer);
std::string help_text();

/// Line-oriented front end: buffers multi-line defines until "?".
class Repl {
 public:
  explicit Repl(Session& session) : session_(session) {}

  /// Feeds one input line and returns the rendered output (empty while a
  /// define is still open).
  std::string step(std::string_view line);
  std::string_view prompt() const { return buffer_.empty() ? "?- " : "|  "; }
  bool finished() const { return finished_; }

 private:
  Session& session_;
  std::string buffer_;
  bool finished_ = false;
};

/// Replays a script, echoing each line after the prompt followed by its
/// output. Stops after exit.
std::string transcript(Session& session, std::istream& script);

}  // namespace aspic
