#pragma once

// Abstract syntax for function-free normal logic programs, the query
// language, and the shell command language, together with their parsers
// and printers.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace aspic {

/// A function-free term: an integer, a constant symbol, or a variable.
/// The kind order makes integers sort before constants.
struct Term {
  enum class Kind : std::uint8_t { Integer, Symbol, Variable };

  Kind kind = Kind::Symbol;
  std::int64_t number = 0;
  std::string name;

  static Term integer(std::int64_t value) { return {Kind::Integer, value, {}}; }
  static Term symbol(std::string name) { return {Kind::Symbol, 0, std::move(name)}; }
  static Term variable(std::string name) { return {Kind::Variable, 0, std::move(name)}; }

  bool is_variable() const { return kind == Kind::Variable; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  bool is_ground() const;
  std::size_t arity() const { return args.size(); }

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Literal {
  bool negative = false;
  Atom atom;

  Literal complement() const { return {!negative, atom}; }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

enum class Relation : std::uint8_t { Equal, NotEqual, Less, LessEqual, Greater, GreaterEqual };

/// Built-in comparison between two terms. Only evaluable once both sides
/// are ground.
struct Comparison {
  Term left;
  Relation relation = Relation::Equal;
  Term right;

  bool evaluate() const;

  friend bool operator==(const Comparison&, const Comparison&) = default;
  friend auto operator<=>(const Comparison&, const Comparison&) = default;
};

using BodyElement = std::variant<Literal, Comparison>;
using Body = std::vector<BodyElement>;

enum class HeadKind : std::uint8_t { Atom, Choice, Falsity };

struct Rule {
  HeadKind kind = HeadKind::Atom;
  Atom head;  // unused for Falsity
  Body body;

  std::vector<Atom> positive_body() const;
  std::vector<Atom> negative_body() const;
  bool is_ground() const;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Program {
  std::vector<Rule> rules;

  friend bool operator==(const Program&, const Program&) = default;
};

struct ExternalDecl {
  Atom atom;
  Body condition;

  friend bool operator==(const ExternalDecl&, const ExternalDecl&) = default;
};

struct ShowDecl {
  std::string predicate;
  std::size_t arity = 0;

  friend bool operator==(const ShowDecl&, const ShowDecl&) = default;
  friend auto operator<=>(const ShowDecl&, const ShowDecl&) = default;
};

/// Result of parsing a program file: rules plus directives, each in source order.
struct ParsedProgram {
  Program program;
  std::vector<ExternalDecl> externals;
  std::vector<ShowDecl> shows;

  friend bool operator==(const ParsedProgram&, const ParsedProgram&) = default;
};

/// Boolean query in negation normal form. Negation only sits directly above
/// atom leaves; non-ground queries are conjunctions of literals.
struct QueryExpr {
  enum class Kind : std::uint8_t { Atom, Not, And, Or };

  Kind kind = Kind::Atom;
  Atom atom;                       // Atom and Not
  std::vector<QueryExpr> children; // And and Or

  static QueryExpr leaf(Atom a) { return {Kind::Atom, std::move(a), {}}; }
  static QueryExpr negation(Atom a) { return {Kind::Not, std::move(a), {}}; }
  static QueryExpr conjunction(std::vector<QueryExpr> c) { return {Kind::And, {}, std::move(c)}; }
  static QueryExpr disjunction(std::vector<QueryExpr> c) { return {Kind::Or, {}, std::move(c)}; }

  bool is_ground() const;
  bool is_atomic() const { return kind == Kind::Atom; }
  /// Literals of a conjunctive query (a single literal or an And of literals).
  std::optional<std::vector<Literal>> conjunctive_literals() const;

  friend bool operator==(const QueryExpr&, const QueryExpr&) = default;
};

// Shell commands.
namespace command {
struct Load { std::string path; };
struct Define { std::vector<Rule> rules; };
struct External { ExternalDecl decl; };
struct Assert { Atom atom; };
struct Open { Atom atom; };
struct Retract { Atom atom; };
struct Release { Atom atom; };
struct Assume { Literal literal; };
struct Cancel { Literal literal; };
struct Query { QueryExpr expr; };
struct Option { std::vector<std::string> args; };
struct State {};
struct Help {};
struct Exit {};
struct Nothing {};  // blank or comment-only line
}  // namespace command

using Command = std::variant<command::Load, command::Define, command::External, command::Assert,
                             command::Open, command::Retract, command::Release, command::Assume,
                             command::Cancel, command::Query, command::Option, command::State,
                             command::Help, command::Exit, command::Nothing>;

/// Returned by parse_command while a multi-line define is still open.
struct NeedMoreInput {};

using CommandParse = std::variant<Command, NeedMoreInput>;

class ParseError : public std::runtime_error {
 public:
  enum class Kind : std::uint8_t { Syntax, ReservedName, Unsupported };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

ParsedProgram parse_program(std::string_view text);
QueryExpr parse_query(std::string_view text);
/// Parses one command. `text` holds the whole command, possibly spanning
/// several lines for define, which is complete once it ends with "?".
CommandParse parse_command(std::string_view text);

// Printing in the program grammar.
std::string to_string(const Term& term);
std::string to_string(const Atom& atom);
std::string to_string(const Literal& literal);
std::string to_string(const Comparison& comparison);
std::string to_string(const BodyElement& element);
std::string to_string(const Rule& rule);
std::string to_string(const ExternalDecl& decl);
std::string to_string(const ShowDecl& show);
std::string to_string(const ParsedProgram& program);
std::string to_string(const QueryExpr& query);

/// True for names in the "__" namespace used by generated atoms.
bool is_reserved_name(std::string_view name);

/// Variables of a body element or atom, appended in order of first occurrence.
void collect_variables(const Atom& atom, std::vector<std::string>& out);
void collect_variables(const BodyElement& element, std::vector<std::string>& out);

}  // namespace aspic
