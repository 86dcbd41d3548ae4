#include "aspic/shell.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace aspic {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string rejection(const Composition& c, const AtomTable& table) {
  switch (c.verdict) {
    case Composition::Verdict::SharedHead:
      return "define has no effect: " + table.name(c.witness) + " is already defined";
    case Composition::Verdict::PositiveCycle:
      return "define has no effect: " + table.name(c.witness) +
             " would be in a positive cycle with existing rules";
    case Composition::Verdict::Compositional: break;
  }
  return "define has no effect";
}

std::vector<GroundRule> instantiate(std::span<const Rule> rules, SystemState& state,
                                    const std::set<Atom>& extra_atoms) {
  std::set<Atom> base = atoms_of(state.atom_base(), state.table());
  HerbrandUniverse universe;
  for (const auto& a : base) universe.add(a);
  for (const auto& a : extra_atoms) universe.add(a);
  for (const auto& r : rules) universe.add(r);
  Program ground = ground_rules(rules, universe, base);
  std::vector<GroundRule> out;
  for (const auto& r : ground.rules) out.push_back(intern_rule(r, state.table()));
  return out;
}

struct Executor {
  SystemState& state;
  SessionOptions& options;
  Outcome& out;
  const std::filesystem::path& directory;

  void declare_inputs(const std::vector<Atom>& atoms) {
    for (const auto& atom : atoms) {
      AtomId id = state.intern(atom);
      if (!state.external(id) && !state.inputs().count(id)) {
        out.warnings.push_back(to_string(atom) + " is defined by rules and stays non-input");
      }
    }
  }

  void define(std::vector<GroundRule> rules) {
    DefineResult result = state.define(std::move(rules));
    if (!result.applied) out.warnings.push_back(rejection(result.composition, state.table()));
  }

  void operator()(const command::Load& c) {
    std::filesystem::path path = directory / c.path;
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot read " + c.path);
    std::stringstream text;
    text << file.rdbuf();
    ParsedProgram parsed;
    try {
      parsed = parse_program(text.str());
    } catch (const ParseError& e) {
      throw std::runtime_error(c.path + ":" + e.what());
    }
    for (const auto& s : parsed.shows) state.add_show(s);

    std::set<Atom> before = atoms_of(state.possible_atoms(), state.table());
    std::set<Atom> possible = possible_atoms(parsed.program.rules, parsed.externals, before);
    HerbrandUniverse universe;
    for (const auto& a : possible) universe.add(a);
    for (const auto& r : parsed.program.rules) universe.add(r);
    std::size_t inputs = state.inputs().size();
    for (const auto& decl : parsed.externals) declare_inputs(ground_external(decl, universe, possible));

    std::size_t rules = state.rules().size();
    define(instantiate(parsed.program.rules, state, possible));
    std::size_t count = state.rules().size() - std::min(rules, state.rules().size());
    std::size_t declared = state.inputs().size() - std::min(inputs, state.inputs().size());
    out.output.push_back("loaded " + c.path + ": " + std::to_string(count) + " ground rules, " +
                         std::to_string(declared) + " input atoms");
  }

  void operator()(const command::Define& c) { define(instantiate(c.rules, state, {})); }

  void operator()(const command::External& c) {
    std::set<Atom> possible = atoms_of(state.possible_atoms(), state.table());
    HerbrandUniverse universe;
    for (const auto& a : possible) universe.add(a);
    universe.add(c.decl.atom);
    declare_inputs(ground_external(c.decl, universe, possible));
  }

  template <typename Op>
  void on_input(const Atom& atom, Op op) {
    AtomId id = state.intern(atom);
    if (!state.inputs().count(id)) {
      out.warnings.push_back(to_string(atom) + " is not an input atom");
      return;
    }
    (state.*op)(id);
  }

  void operator()(const command::Assert& c) { on_input(c.atom, &SystemState::assert_input); }
  void operator()(const command::Open& c) { on_input(c.atom, &SystemState::open_input); }
  void operator()(const command::Retract& c) { on_input(c.atom, &SystemState::retract_input); }
  void operator()(const command::Release& c) { on_input(c.atom, &SystemState::release); }

  void operator()(const command::Assume& c) { state.assume({state.intern(c.literal.atom), c.literal.negative}); }
  void operator()(const command::Cancel& c) { state.cancel({state.intern(c.literal.atom), c.literal.negative}); }

  void operator()(const command::Query& c) {
    Mode mode = Mode::enumerate(options.model_limit);
    if (options.mode == ModeKind::Union) mode = Mode::brave();
    if (options.mode == ModeKind::Intersection) mode = Mode::cautious();
    QueryAnswer answer = run_query(c.expr, mode, Filter::Identity, state);
    AnswerView view;
    view.verdict = answer.verdict;
    view.satisfiable = answer.satisfiable;
    view.mode = answer.mode;
    for (const auto& m : answer.models) {
      std::set<Atom> atoms = atoms_of({m.begin(), m.end()}, state.table());
      std::vector<std::string> names;
      for (const auto& a : atoms) names.push_back(to_string(a));
      view.models.push_back(std::move(names));
    }
    out.answer = std::move(view);
  }

  void operator()(const command::Option& c) {
    if (c.args.empty()) {
      const char* mode = options.mode == ModeKind::Union          ? "brave"
                         : options.mode == ModeKind::Intersection ? "cautious"
                                                                  : "auto";
      out.output.push_back("-n " + std::to_string(options.model_limit) + " -e " + mode);
      return;
    }
    for (std::size_t k = 0; k < c.args.size(); ++k) {
      const std::string& flag = c.args[k];
      if (k + 1 >= c.args.size()) throw std::runtime_error("option " + flag + " needs a value");
      const std::string& value = c.args[++k];
      if (flag == "-n") {
        std::size_t n = 0;
        auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
        if (ec != std::errc() || end != value.data() + value.size()) {
          throw std::runtime_error("-n expects a non-negative integer, got " + value);
        }
        options.model_limit = n;
      } else if (flag == "-e") {
        if (value == "brave") {
          options.mode = ModeKind::Union;
        } else if (value == "cautious") {
          options.mode = ModeKind::Intersection;
        } else if (value == "auto") {
          options.mode = ModeKind::Enumerate;
        } else {
          throw std::runtime_error("-e expects brave, cautious, or auto, got " + value);
        }
      } else {
        throw std::runtime_error("unknown option " + flag);
      }
    }
  }

  void operator()(const command::State&) { out.output = split_lines(dump_state(state)); }
  void operator()(const command::Help&) { out.output = split_lines(help_text()); }
  void operator()(const command::Exit&) { out.exit = true; }
  void operator()(const command::Nothing&) {}
};

std::string join(const std::vector<std::string>& atoms) {
  std::string out;
  for (const auto& a : atoms) {
    if (!out.empty()) out += ' ';
    out += a;
  }
  return out;
}

}  // namespace

Session::Session(std::filesystem::path working_directory) : working_directory_(std::move(working_directory)) {}

Outcome Session::execute(const Command& command) {
  SystemState working = state_;
  SessionOptions options = options_;
  Outcome out;
  try {
    std::visit(Executor{working, options, out, working_directory_}, command);
  } catch (const std::exception& e) {
    Outcome failed;
    failed.error = e.what();
    return failed;
  }
  state_ = std::move(working);
  options_ = options;
  return out;
}

Outcome Session::execute_text(std::string_view text) {
  try {
    CommandParse parsed = parse_command(text);
    if (std::holds_alternative<NeedMoreInput>(parsed)) {
      Outcome out;
      out.error = "incomplete command: define must end with ?";
      return out;
    }
    return execute(std::get<Command>(parsed));
  } catch (const ParseError& e) {
    Outcome out;
    out.error = e.what();
    return out;
  }
}

std::string render_answer(const AnswerView& answer) {
  std::string out;
  if (answer.mode == ModeKind::Enumerate) {
    for (std::size_t k = 0; k < answer.models.size(); ++k) {
      out += "Answer: " + std::to_string(k + 1) + "\n" + join(answer.models[k]) + "\n";
    }
  } else if (answer.satisfiable && !answer.models.empty()) {
    out += join(answer.models.front()) + "\n";
  }
  out += answer.satisfiable ? "SAT\n" : "UNSAT\n";
  return out;
}

std::string render(const Outcome& outcome) {
  std::string out;
  for (const auto& line : outcome.output) out += line + "\n";
  if (outcome.answer) out += render_answer(*outcome.answer);
  for (const auto& w : outcome.warnings) out += "warning: " + w + "\n";
  if (outcome.error) out += "error: " + *outcome.error + "\n";
  return out;
}

std::string help_text() {
  return "load <file>            read rules, #external and #show directives\n"
         "define <rules> ?       add rules; may span lines until ?\n"
         "external <atom> [: <body>]\n"
         "                       declare input atoms\n"
         "assert <atom>          set an input atom true\n"
         "open <atom>            leave an input atom undefined\n"
         "retract <atom>         set an input atom false\n"
         "release <atom>         turn an input atom into a false non-input\n"
         "assume [not] <atom>    require an atom to hold (or not)\n"
         "cancel [not] <atom>    drop an assumption\n"
         "query <query>          literals combined with & and |, grouped by [ ]\n"
         "option -n <k>          models to print, 0 for all\n"
         "option -e <mode>       brave, cautious, or auto\n"
         "state                  print the current state\n"
         "help                   this text\n"
         "exit                   leave the shell\n";
}

std::string Repl::step(std::string_view line) {
  if (!buffer_.empty()) buffer_ += '\n';
  buffer_ += line;
  CommandParse parsed;
  try {
    parsed = parse_command(buffer_);
  } catch (const ParseError& e) {
    buffer_.clear();
    return std::string("error: ") + e.what() + "\n";
  }
  if (std::holds_alternative<NeedMoreInput>(parsed)) return {};
  buffer_.clear();
  Outcome outcome = session_.execute(std::get<Command>(parsed));
  if (outcome.exit) finished_ = true;
  return render(outcome);
}

std::string transcript(Session& session, std::istream& script) {
  Repl repl(session);
  std::string out;
  for (std::string line; !repl.finished() && std::getline(script, line);) {
    out += std::string(repl.prompt()) + line + "\n";
    out += repl.step(line);
  }
  return out;
}

}  // namespace aspic
