#include "aspic/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace aspic {

namespace {

enum class Tok : std::uint8_t {
  Ident,
  Variable,
  Integer,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Dot,
  If,     // :-
  Colon,
  Slash,
  Amp,
  Bar,
  Question,
  Relation,
  External,  // #external
  Show,      // #show
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t number = 0;
  Relation relation = Relation::Equal;
  std::size_t offset = 0;
};

std::pair<std::size_t, std::size_t> position(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

[[noreturn]] void fail(std::string_view text, std::size_t offset, const std::string& message,
                       ParseError::Kind kind = ParseError::Kind::Syntax) {
  auto [line, column] = position(text, offset);
  throw ParseError(kind, line, column, message);
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  Lexer(std::string_view text, std::size_t begin, std::size_t end)
      : text_(text), pos_(begin), end_(end) {}

  Token next() {
    skip_space();
    Token tok;
    tok.offset = pos_;
    if (pos_ >= end_) {
      tok.kind = Tok::End;
      return tok;
    }
    char c = text_[pos_];
    auto single = [&](Tok kind) {
      tok.kind = kind;
      tok.text = std::string(1, c);
      ++pos_;
      return tok;
    };
    if (std::islower(static_cast<unsigned char>(c))) {
      tok.kind = Tok::Ident;
      tok.text = word();
      return tok;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      tok.kind = Tok::Variable;
      tok.text = word();
      return tok;
    }
    if (c == '_') {
      if (pos_ + 1 < end_ && text_[pos_ + 1] == '_') {
        fail(text_, pos_, "identifiers starting with \"__\" are reserved", ParseError::Kind::ReservedName);
      }
      fail(text_, pos_, "anonymous variables are not supported");
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < end_ && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      std::size_t start = pos_;
      ++pos_;
      while (pos_ < end_ && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ < end_ && ident_char(text_[pos_])) fail(text_, pos_, "malformed number");
      tok.kind = Tok::Integer;
      tok.text = std::string(text_.substr(start, pos_ - start));
      auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.number);
      if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
        fail(text_, start, "integer out of range: " + tok.text);
      }
      return tok;
    }
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case ',': return single(Tok::Comma);
      case '.': return single(Tok::Dot);
      case '/': return single(Tok::Slash);
      case '&': return single(Tok::Amp);
      case '|': return single(Tok::Bar);
      case '?': return single(Tok::Question);
      case ':':
        if (peek(1) == '-') {
          pos_ += 2;
          tok.kind = Tok::If;
          tok.text = ":-";
          return tok;
        }
        return single(Tok::Colon);
      case '=':
        tok.kind = Tok::Relation;
        tok.relation = Relation::Equal;
        pos_ += peek(1) == '=' ? 2 : 1;
        tok.text = "=";
        return tok;
      case '!':
        if (peek(1) != '=') fail(text_, pos_, "unexpected character '!'");
        pos_ += 2;
        tok.kind = Tok::Relation;
        tok.relation = Relation::NotEqual;
        tok.text = "!=";
        return tok;
      case '<':
        tok.kind = Tok::Relation;
        if (peek(1) == '=') {
          tok.relation = Relation::LessEqual;
          tok.text = "<=";
          pos_ += 2;
        } else if (peek(1) == '>') {
          tok.relation = Relation::NotEqual;
          tok.text = "<>";
          pos_ += 2;
        } else {
          tok.relation = Relation::Less;
          tok.text = "<";
          ++pos_;
        }
        return tok;
      case '>':
        tok.kind = Tok::Relation;
        if (peek(1) == '=') {
          tok.relation = Relation::GreaterEqual;
          tok.text = ">=";
          pos_ += 2;
        } else {
          tok.relation = Relation::Greater;
          tok.text = ">";
          ++pos_;
        }
        return tok;
      case '#': {
        ++pos_;
        std::string name = word();
        if (name == "external") {
          tok.kind = Tok::External;
        } else if (name == "show") {
          tok.kind = Tok::Show;
        } else {
          fail(text_, tok.offset, "unsupported directive #" + name, ParseError::Kind::Unsupported);
        }
        tok.text = "#" + name;
        return tok;
      }
      default:
        break;
    }
    fail(text_, pos_, std::string("unexpected character '") + c + "'");
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < end_ ? text_[pos_ + ahead] : '\0';
  }

  std::string word() {
    std::size_t start = pos_;
    while (pos_ < end_ && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < end_) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < end_ && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_;
  std::size_t end_;
};

class Parser {
 public:
  Parser(std::string_view text, std::size_t begin, std::size_t end)
      : text_(text), lexer_(text, begin, end) {
    advance();
  }

  const Token& current() const { return tok_; }
  bool at(Tok kind) const { return tok_.kind == kind; }

  void expect(Tok kind, const char* what) {
    if (!at(kind)) error(std::string("expected ") + what);
    advance();
  }

  void accept(Tok kind) {
    if (at(kind)) advance();
  }

  [[noreturn]] void error(const std::string& message) const {
    std::string found = tok_.kind == Tok::End ? "end of input" : "'" + tok_.text + "'";
    fail(text_, tok_.offset, message + ", found " + found);
  }

  void expect_end() {
    if (!at(Tok::End)) error("unexpected trailing input");
  }

  Term term() {
    Term t;
    switch (tok_.kind) {
      case Tok::Integer: t = Term::integer(tok_.number); break;
      case Tok::Variable: t = Term::variable(tok_.text); break;
      case Tok::Ident:
        if (tok_.text == "not") error("expected term");
        t = Term::symbol(tok_.text);
        break;
      default: error("expected term");
    }
    advance();
    return t;
  }

  Atom atom() {
    if (!at(Tok::Ident) || tok_.text == "not") error("expected atom");
    Atom a;
    a.predicate = tok_.text;
    advance();
    if (at(Tok::LParen)) {
      advance();
      a.args.push_back(term());
      while (at(Tok::Comma)) {
        advance();
        a.args.push_back(term());
      }
      expect(Tok::RParen, "')'");
    }
    return a;
  }

  Literal literal() {
    Literal lit;
    if (at(Tok::Ident) && tok_.text == "not") {
      advance();
      lit.negative = true;
    }
    lit.atom = atom();
    return lit;
  }

  BodyElement body_element() {
    if (at(Tok::Ident) && tok_.text == "not") return literal();
    if (at(Tok::Variable) || at(Tok::Integer)) {
      Term left = term();
      return comparison_rest(std::move(left));
    }
    Atom a = atom();
    if (at(Tok::Relation)) {
      if (!a.args.empty()) error("comparisons take terms, not atoms");
      return comparison_rest(Term::symbol(a.predicate));
    }
    return Literal{false, std::move(a)};
  }

  Body body() {
    Body out;
    if (at(Tok::Dot) || at(Tok::End) || at(Tok::Question)) return out;
    out.push_back(body_element());
    while (at(Tok::Comma)) {
      advance();
      out.push_back(body_element());
    }
    return out;
  }

  Rule rule() {
    Rule r;
    if (at(Tok::If)) {
      r.kind = HeadKind::Falsity;
    } else if (at(Tok::LBrace)) {
      advance();
      r.kind = HeadKind::Choice;
      r.head = atom();
      if (!at(Tok::RBrace)) error("choice heads hold exactly one atom; expected '}'");
      advance();
    } else {
      r.kind = HeadKind::Atom;
      r.head = atom();
    }
    if (at(Tok::If)) {
      advance();
      r.body = body();
    } else if (r.kind == HeadKind::Falsity) {
      error("expected ':-'");
    }
    expect(Tok::Dot, "'.'");
    return r;
  }

  /// Parses rules and directives until End (or '?' when `stop_at_question`).
  ParsedProgram statements(bool allow_directives, bool stop_at_question) {
    ParsedProgram out;
    while (!at(Tok::End) && !(stop_at_question && at(Tok::Question))) {
      if (at(Tok::External) || at(Tok::Show)) {
        if (!allow_directives) error("directives are not allowed here");
        if (at(Tok::External)) {
          advance();
          out.externals.push_back(external_rest(true));
        } else {
          advance();
          ShowDecl show;
          if (!at(Tok::Ident)) error("expected predicate name");
          show.predicate = tok_.text;
          advance();
          expect(Tok::Slash, "'/'");
          if (!at(Tok::Integer) || tok_.number < 0) error("expected arity");
          show.arity = static_cast<std::size_t>(tok_.number);
          advance();
          expect(Tok::Dot, "'.'");
          out.shows.push_back(std::move(show));
        }
        continue;
      }
      out.program.rules.push_back(rule());
    }
    return out;
  }

  ExternalDecl external_rest(bool require_dot) {
    ExternalDecl decl;
    decl.atom = atom();
    if (at(Tok::Colon)) {
      advance();
      decl.condition = body();
    }
    if (require_dot) {
      expect(Tok::Dot, "'.'");
    } else {
      accept(Tok::Dot);
    }
    return decl;
  }

  QueryExpr query() {
    std::size_t start = tok_.offset;
    QueryExpr q = disjunction();
    accept(Tok::Dot);
    expect_end();
    if (!q.is_ground() && !q.conjunctive_literals()) {
      fail(text_, start, "non-ground queries must be conjunctions of literals");
    }
    return q;
  }

 private:
  BodyElement comparison_rest(Term left) {
    if (!at(Tok::Relation)) error("expected comparison operator");
    Relation rel = tok_.relation;
    advance();
    Term right = term();
    return Comparison{std::move(left), rel, std::move(right)};
  }

  QueryExpr disjunction() {
    std::vector<QueryExpr> parts;
    parts.push_back(conjunction());
    while (at(Tok::Bar)) {
      advance();
      parts.push_back(conjunction());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return QueryExpr::disjunction(std::move(parts));
  }

  QueryExpr conjunction() {
    std::vector<QueryExpr> parts;
    parts.push_back(unary());
    while (at(Tok::Amp)) {
      advance();
      parts.push_back(unary());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return QueryExpr::conjunction(std::move(parts));
  }

  QueryExpr unary() {
    if (at(Tok::LBracket)) {
      advance();
      QueryExpr inner = disjunction();
      expect(Tok::RBracket, "']'");
      return inner;
    }
    if (at(Tok::Ident) && tok_.text == "not") {
      advance();
      if (at(Tok::LBracket) || (at(Tok::Ident) && tok_.text == "not")) {
        error("negation applies to atoms only (negation normal form)");
      }
      return QueryExpr::negation(atom());
    }
    return QueryExpr::leaf(atom());
  }

  void advance() { tok_ = lexer_.next(); }

  std::string_view text_;
  Lexer lexer_;
  Token tok_;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Offset of the first '?' outside comments, or npos.
std::size_t find_terminator(std::string_view text, std::size_t from) {
  for (std::size_t k = from; k < text.size(); ++k) {
    if (text[k] == '%') {
      while (k < text.size() && text[k] != '\n') ++k;
    } else if (text[k] == '?') {
      return k;
    }
  }
  return std::string_view::npos;
}

Atom ground_atom_argument(std::string_view text, std::size_t begin, const std::string& verb) {
  Parser p(text, begin, text.size());
  std::size_t start = p.current().offset;
  Atom a = p.atom();
  p.accept(Tok::Dot);
  p.expect_end();
  if (!a.is_ground()) fail(text, start, verb + " takes a ground atom");
  return a;
}

Literal ground_literal_argument(std::string_view text, std::size_t begin, const std::string& verb) {
  Parser p(text, begin, text.size());
  std::size_t start = p.current().offset;
  Literal l = p.literal();
  p.accept(Tok::Dot);
  p.expect_end();
  if (!l.atom.is_ground()) fail(text, start, verb + " takes a ground literal");
  return l;
}

const char* relation_text(Relation r) {
  switch (r) {
    case Relation::Equal: return "=";
    case Relation::NotEqual: return "!=";
    case Relation::Less: return "<";
    case Relation::LessEqual: return "<=";
    case Relation::Greater: return ">";
    case Relation::GreaterEqual: return ">=";
  }
  return "?";
}

template <typename Range, typename Fn>
std::string join(const Range& range, std::string_view sep, Fn fn) {
  std::string out;
  bool first = true;
  for (const auto& item : range) {
    if (!first) out += sep;
    first = false;
    out += fn(item);
  }
  return out;
}

}  // namespace

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

bool Comparison::evaluate() const {
  if (left.is_variable() || right.is_variable()) {
    throw std::logic_error("comparison evaluated before grounding: " + to_string(*this));
  }
  auto order = left <=> right;
  switch (relation) {
    case Relation::Equal: return order == 0;
    case Relation::NotEqual: return order != 0;
    case Relation::Less: return order < 0;
    case Relation::LessEqual: return order <= 0;
    case Relation::Greater: return order > 0;
    case Relation::GreaterEqual: return order >= 0;
  }
  return false;
}

std::vector<Atom> Rule::positive_body() const {
  std::vector<Atom> out;
  for (const auto& e : body) {
    if (auto* lit = std::get_if<Literal>(&e); lit && !lit->negative) out.push_back(lit->atom);
  }
  return out;
}

std::vector<Atom> Rule::negative_body() const {
  std::vector<Atom> out;
  for (const auto& e : body) {
    if (auto* lit = std::get_if<Literal>(&e); lit && lit->negative) out.push_back(lit->atom);
  }
  return out;
}

bool Rule::is_ground() const {
  std::vector<std::string> vars;
  if (kind != HeadKind::Falsity) collect_variables(head, vars);
  for (const auto& e : body) collect_variables(e, vars);
  return vars.empty();
}

bool QueryExpr::is_ground() const {
  if (kind == Kind::Atom || kind == Kind::Not) return atom.is_ground();
  return std::all_of(children.begin(), children.end(), [](const QueryExpr& c) { return c.is_ground(); });
}

std::optional<std::vector<Literal>> QueryExpr::conjunctive_literals() const {
  switch (kind) {
    case Kind::Atom: return std::vector<Literal>{{false, atom}};
    case Kind::Not: return std::vector<Literal>{{true, atom}};
    case Kind::Or: return std::nullopt;
    case Kind::And: {
      std::vector<Literal> out;
      for (const auto& c : children) {
        if (c.kind == Kind::Atom) {
          out.push_back({false, c.atom});
        } else if (c.kind == Kind::Not) {
          out.push_back({true, c.atom});
        } else {
          return std::nullopt;
        }
      }
      return out;
    }
  }
  return std::nullopt;
}

bool is_reserved_name(std::string_view name) { return name.size() >= 2 && name.substr(0, 2) == "__"; }

void collect_variables(const Atom& atom, std::vector<std::string>& out) {
  for (const auto& t : atom.args) {
    if (t.is_variable() && std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
  }
}

void collect_variables(const BodyElement& element, std::vector<std::string>& out) {
  if (auto* lit = std::get_if<Literal>(&element)) {
    collect_variables(lit->atom, out);
    return;
  }
  const auto& cmp = std::get<Comparison>(element);
  for (const Term* t : {&cmp.left, &cmp.right}) {
    if (t->is_variable() && std::find(out.begin(), out.end(), t->name) == out.end()) out.push_back(t->name);
  }
}

ParsedProgram parse_program(std::string_view text) {
  Parser p(text, 0, text.size());
  return p.statements(true, false);
}

QueryExpr parse_query(std::string_view text) {
  Parser p(text, 0, text.size());
  return p.query();
}

CommandParse parse_command(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] == '%') {
      while (pos < text.size() && text[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos == text.size()) return Command{command::Nothing{}};
  std::size_t word_start = pos;
  while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
  std::string verb(text.substr(word_start, pos - word_start));
  if (verb.empty()) fail(text, word_start, "expected a command (try 'help')");
  if (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) {
    fail(text, word_start, "unknown command '" + std::string(trim(text.substr(word_start))) + "'");
  }
  std::string_view rest = trim(text.substr(pos));

  auto no_argument = [&]() {
    if (!rest.empty()) fail(text, pos, "'" + verb + "' takes no argument");
  };

  if (verb == "define") {
    std::size_t question = find_terminator(text, pos);
    if (question == std::string_view::npos) return NeedMoreInput{};
    Parser p(text, pos, text.size());
    ParsedProgram parsed = p.statements(false, true);
    p.expect(Tok::Question, "'?'");
    p.expect_end();
    return Command{command::Define{std::move(parsed.program.rules)}};
  }
  if (verb == "load") {
    if (rest.empty()) fail(text, pos, "load expects a file name");
    return Command{command::Load{std::string(rest)}};
  }
  if (verb == "external") {
    Parser p(text, pos, text.size());
    ExternalDecl decl = p.external_rest(false);
    p.expect_end();
    return Command{command::External{std::move(decl)}};
  }
  if (verb == "assert") return Command{command::Assert{ground_atom_argument(text, pos, verb)}};
  if (verb == "open") return Command{command::Open{ground_atom_argument(text, pos, verb)}};
  if (verb == "retract") return Command{command::Retract{ground_atom_argument(text, pos, verb)}};
  if (verb == "release") return Command{command::Release{ground_atom_argument(text, pos, verb)}};
  if (verb == "assume") return Command{command::Assume{ground_literal_argument(text, pos, verb)}};
  if (verb == "cancel") return Command{command::Cancel{ground_literal_argument(text, pos, verb)}};
  if (verb == "query") {
    if (rest.empty()) fail(text, pos, "query expects an expression");
    Parser p(text, pos, text.size());
    QueryExpr q = p.query();
    return Command{command::Query{std::move(q)}};
  }
  if (verb == "option") {
    command::Option opt;
    std::istringstream in{std::string(rest)};
    for (std::string arg; in >> arg;) opt.args.push_back(arg);
    if (opt.args.empty()) fail(text, pos, "option expects arguments");
    return Command{std::move(opt)};
  }
  if (verb == "state") {
    no_argument();
    return Command{command::State{}};
  }
  if (verb == "help") {
    no_argument();
    return Command{command::Help{}};
  }
  if (verb == "exit" || verb == "quit") {
    no_argument();
    return Command{command::Exit{}};
  }
  fail(text, word_start, "unknown command '" + verb + "'");
}

std::string to_string(const Term& term) {
  if (term.kind == Term::Kind::Integer) return std::to_string(term.number);
  return term.name;
}

std::string to_string(const Atom& atom) {
  if (atom.args.empty()) return atom.predicate;
  return atom.predicate + "(" + join(atom.args, ",", [](const Term& t) { return to_string(t); }) + ")";
}

std::string to_string(const Literal& literal) {
  return (literal.negative ? "not " : "") + to_string(literal.atom);
}

std::string to_string(const Comparison& c) {
  return to_string(c.left) + relation_text(c.relation) + to_string(c.right);
}

std::string to_string(const BodyElement& element) {
  return std::visit([](const auto& e) { return to_string(e); }, element);
}

std::string to_string(const Rule& rule) {
  std::string out;
  switch (rule.kind) {
    case HeadKind::Atom: out = to_string(rule.head); break;
    case HeadKind::Choice: out = "{" + to_string(rule.head) + "}"; break;
    case HeadKind::Falsity: break;
  }
  if (!rule.body.empty()) {
    out += out.empty() ? ":- " : " :- ";
    out += join(rule.body, ", ", [](const BodyElement& e) { return to_string(e); });
  } else if (rule.kind == HeadKind::Falsity) {
    out += ":-";
  }
  return out + ".";
}

std::string to_string(const ExternalDecl& decl) {
  std::string out = "#external " + to_string(decl.atom);
  if (!decl.condition.empty()) {
    out += " : " + join(decl.condition, ", ", [](const BodyElement& e) { return to_string(e); });
  }
  return out + ".";
}

std::string to_string(const ShowDecl& show) {
  return "#show " + show.predicate + "/" + std::to_string(show.arity) + ".";
}

std::string to_string(const ParsedProgram& program) {
  std::string out;
  for (const auto& r : program.program.rules) out += to_string(r) + "\n";
  for (const auto& e : program.externals) out += to_string(e) + "\n";
  for (const auto& s : program.shows) out += to_string(s) + "\n";
  return out;
}

std::string to_string(const QueryExpr& query) {
  using Kind = QueryExpr::Kind;
  switch (query.kind) {
    case Kind::Atom: return to_string(query.atom);
    case Kind::Not: return "not " + to_string(query.atom);
    case Kind::And:
    case Kind::Or: {
      std::string_view sep = query.kind == Kind::And ? " & " : " | ";
      return join(query.children, sep, [&](const QueryExpr& c) {
        bool bracket = c.kind == Kind::Or || (c.kind == Kind::And && query.kind == Kind::And);
        return bracket ? "[" + to_string(c) + "]" : to_string(c);
      });
    }
  }
  return {};
}

}  // namespace aspic
