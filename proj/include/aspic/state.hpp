#pragma once

// The system state (R, I, i, j) of an interactive session and the
// operators that change it.

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aspic/ground.hpp"
#include "aspic/solver.hpp"

namespace aspic {

enum class Truth : std::uint8_t { True, False, Undefined };

/// Three-valued assignment stored as its non-default entries.
class Assignment3 {
 public:
  explicit Assignment3(Truth fallback) : default_(fallback) {}

  Truth value(AtomId atom) const;
  void set(AtomId atom, Truth value);
  void erase(AtomId atom) { values_.erase(atom); }
  /// Atoms explicitly mapped to `value`; for the default value this is
  /// empty, since the characteristic set then depends on the domain.
  std::set<AtomId> characteristic(Truth value) const;
  const std::map<AtomId, Truth>& entries() const { return values_; }
  Truth fallback() const { return default_; }

  friend bool operator==(const Assignment3&, const Assignment3&) = default;

 private:
  Truth default_;
  std::map<AtomId, Truth> values_;
};

/// Which compositionality criterion two programs violate.
struct Composition {
  enum class Verdict : std::uint8_t { Compositional, SharedHead, PositiveCycle };

  Verdict verdict = Verdict::Compositional;
  AtomId witness{};

  bool ok() const { return verdict == Verdict::Compositional; }
};

/// Heads are disjoint and no strongly connected component of the joint
/// positive dependency graph holds heads of both programs.
Composition compositional(std::span<const GroundRule> first, std::span<const GroundRule> second);

/// Drops rules with a positive body atom outside I ∪ head(P) and deletes
/// negative literals over atoms outside it.
std::vector<GroundRule> confine(std::span<const GroundRule> program, const std::set<AtomId>& inputs);

struct DefineResult {
  bool applied = false;
  Composition composition;
  std::size_t rules_added = 0;
};

struct StateDigest {
  std::size_t rules = 0;
  std::size_t inputs = 0;
  std::size_t input_true = 0;
  std::size_t input_undefined = 0;
  std::size_t assumed_true = 0;
  std::size_t assumed_false = 0;

  friend bool operator==(const StateDigest&, const StateDigest&) = default;
};

class SystemState {
 public:
  SystemState() = default;

  // Operators. Each returns whether the state changed; no-ops are legal.
  bool assume(GroundLiteral literal);
  bool cancel(GroundLiteral literal);
  bool assert_input(AtomId atom);
  bool open_input(AtomId atom);
  bool retract_input(AtomId atom);
  DefineResult define(std::vector<GroundRule> rules);
  bool external(AtomId atom);
  bool release(AtomId atom);

  /// R ∪ {a. | a ∈ i^t} ∪ {{a}. | a ∈ i^u} ∪ {:- not a. | a ∈ j^t} ∪ {:- a. | a ∈ j^f}
  std::vector<GroundRule> induced_rules() const;
  GroundProgram induced_program() const { return GroundProgram(induced_rules()); }

  /// Removes every rule that has `atom` in its positive body, except the
  /// a :- a. rule a release adds. Only meaningful for released atoms, which
  /// stay false, so stable models are unaffected.
  void discard_rules_depending_on(AtomId atom);

  const std::vector<GroundRule>& rules() const { return rules_; }
  const std::set<AtomId>& inputs() const { return inputs_; }
  const Assignment3& input_assignment() const { return input_; }
  const Assignment3& assumptions() const { return assumed_; }
  const std::set<AtomId>& released() const { return released_; }
  std::set<AtomId> heads() const;
  /// I ∪ head(R)
  std::set<AtomId> atom_base() const;
  /// Atoms derivable from I and R when negation is ignored and choices
  /// count as facts.
  std::set<AtomId> possible_atoms() const;
  bool has_rule(const GroundRule& rule) const { return rule_set_.count(rule) != 0; }

  Truth input_value(AtomId atom) const;  // f outside I
  StateDigest digest() const;

  AtomTable& table() { return table_; }
  const AtomTable& table() const { return table_; }
  AtomId intern(const Atom& atom) { return table_.intern(atom); }
  /// New atom in the reserved namespace, e.g. "__q3".
  AtomId fresh_atom(std::string_view stem);

  const std::set<ShowDecl>& shows() const { return shows_; }
  void add_show(const ShowDecl& show) { shows_.insert(show); }

  /// Equality on (R, I, i, j); R compares as a set.
  bool same_quadruple(const SystemState& other) const;

 private:
  void add_rule(GroundRule rule);

  AtomTable table_;
  std::vector<GroundRule> rules_;
  std::set<GroundRule> rule_set_;
  std::set<AtomId> inputs_;
  Assignment3 input_{Truth::False};
  Assignment3 assumed_{Truth::Undefined};
  std::set<ShowDecl> shows_;
  std::set<AtomId> released_;
  std::size_t fresh_counter_ = 0;
};

/// Rules and directives of R, I, i, and j in the program grammar, with
/// the assignments as annotated comment lines.
std::string dump_state(const SystemState& state);
std::string to_string(const GroundRule& rule, const AtomTable& table);

}  // namespace aspic
