#pragma once

// Safety checking and instantiation of non-ground rules, external
// declarations, and query rules over a function-free Herbrand universe.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aspic/solver.hpp"
#include "aspic/syntax.hpp"

namespace aspic {

/// Bijection between ground atoms and dense ids. Ids are never reused.
class AtomTable {
 public:
  AtomId intern(const Atom& atom);
  std::optional<AtomId> find(const Atom& atom) const;
  const Atom& atom(AtomId id) const { return atoms_.at(index(id)); }
  std::size_t size() const { return atoms_.size(); }

  std::string name(AtomId id) const { return to_string(atom(id)); }

 private:
  std::vector<Atom> atoms_;
  std::map<Atom, AtomId> ids_;
};

/// Constant and integer terms available for instantiation.
struct HerbrandUniverse {
  std::set<Term> terms;

  void add(const Atom& atom);
  void add(const Rule& rule);
  bool contains(const Term& term) const { return terms.count(term) != 0; }
};

struct SafetyResult {
  std::vector<std::string> unsafe_variables;  // sorted

  bool ok() const { return unsafe_variables.empty(); }
};

/// A rule is safe iff each of its variables occurs in a positive
/// non-builtin body literal.
SafetyResult check_safety(const Rule& rule);
SafetyResult check_safety(const ExternalDecl& decl);

class SafetyError : public std::runtime_error {
 public:
  SafetyError(const std::string& what, std::vector<std::string> variables);
  const std::vector<std::string>& variables() const { return variables_; }

 private:
  std::vector<std::string> variables_;
};

/// Atoms derivable when negation is ignored and choices count as facts,
/// starting from `base`. External declarations contribute their instances.
/// Rules must be safe.
std::set<Atom> possible_atoms(std::span<const Rule> rules, std::span<const ExternalDecl> externals,
                              const std::set<Atom>& base);

/// Instantiates safe rules. Instances whose comparisons fail are dropped, as
/// are instances with a positive body atom outside `base` and the possible
/// heads; bindings are restricted to `universe`. Variable-free rules are
/// kept whenever their comparisons hold. Instances of each rule come out
/// ordered by their substitution, rule after rule.
Program ground_rules(std::span<const Rule> rules, const HerbrandUniverse& universe,
                     const std::set<Atom>& base);

/// Ground instances of an external declaration whose positive condition
/// literals lie in `possible` and whose comparisons hold. Sorted. Throws
/// SafetyError on an unsafe declaration.
std::vector<Atom> ground_external(const ExternalDecl& decl, const HerbrandUniverse& universe,
                                  const std::set<Atom>& possible);

/// Converts a ground, comparison-free rule to atom ids, interning its atoms.
GroundRule intern_rule(const Rule& rule, AtomTable& table);

/// The atoms behind a set of ids.
std::set<Atom> atoms_of(const std::set<AtomId>& ids, const AtomTable& table);

}  // namespace aspic
