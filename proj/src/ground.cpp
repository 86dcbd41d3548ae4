#include "aspic/ground.hpp"

#include <algorithm>

namespace aspic {

namespace {

using Binding = std::vector<std::pair<std::string, Term>>;

const Term* lookup(const Binding& binding, const std::string& name) {
  for (const auto& [var, value] : binding) {
    if (var == name) return &value;
  }
  return nullptr;
}

Term substitute(const Term& term, const Binding& binding) {
  if (!term.is_variable()) return term;
  const Term* value = lookup(binding, term.name);
  return value ? *value : term;
}

Atom substitute(const Atom& atom, const Binding& binding) {
  Atom out{atom.predicate, {}};
  out.args.reserve(atom.args.size());
  for (const auto& t : atom.args) out.args.push_back(substitute(t, binding));
  return out;
}

// Extends `binding` so that `pattern` matches the ground `target`; the
// number of variables added is returned through `added`.
bool unify(const Atom& pattern, const Atom& target, const HerbrandUniverse& universe, Binding& binding,
           std::size_t& added) {
  added = 0;
  if (pattern.predicate != target.predicate || pattern.args.size() != target.args.size()) return false;
  for (std::size_t k = 0; k < pattern.args.size(); ++k) {
    const Term& p = pattern.args[k];
    const Term& t = target.args[k];
    if (!p.is_variable()) {
      if (p != t) return false;
      continue;
    }
    if (const Term* bound = lookup(binding, p.name)) {
      if (*bound != t) return false;
      continue;
    }
    if (!universe.contains(t)) return false;
    binding.emplace_back(p.name, t);
    ++added;
  }
  return true;
}

// Ground atoms grouped by predicate and arity.
class AtomIndex {
 public:
  explicit AtomIndex(const std::set<Atom>& atoms) {
    for (const auto& a : atoms) insert(a);
  }

  bool insert(const Atom& atom) {
    if (!seen_.insert(atom).second) return false;
    buckets_[{atom.predicate, atom.args.size()}].push_back(atom);
    return true;
  }

  const std::vector<Atom>& candidates(const Atom& pattern) const {
    static const std::vector<Atom> empty;
    auto it = buckets_.find({pattern.predicate, pattern.args.size()});
    return it == buckets_.end() ? empty : it->second;
  }

 private:
  std::set<Atom> seen_;
  std::map<std::pair<std::string, std::size_t>, std::vector<Atom>> buckets_;
};

// Enumerates bindings that map every positive literal of `body` into
// `index` and satisfy every comparison.
template <typename Fn>
void match_body(const Body& body, const AtomIndex& index, const HerbrandUniverse& universe, Fn&& emit) {
  std::vector<const Atom*> positives;
  std::vector<const Comparison*> comparisons;
  for (const auto& e : body) {
    if (auto* lit = std::get_if<Literal>(&e)) {
      if (!lit->negative) positives.push_back(&lit->atom);
    } else {
      comparisons.push_back(&std::get<Comparison>(e));
    }
  }
  Binding binding;
  auto recurse = [&](auto& self, std::size_t k) -> void {
    if (k == positives.size()) {
      for (const Comparison* c : comparisons) {
        Comparison g{substitute(c->left, binding), c->relation, substitute(c->right, binding)};
        if (!g.evaluate()) return;
      }
      emit(binding);
      return;
    }
    for (const Atom& candidate : index.candidates(*positives[k])) {
      std::size_t added = 0;
      if (unify(*positives[k], candidate, universe, binding, added)) self(self, k + 1);
      binding.resize(binding.size() - added);
    }
  };
  recurse(recurse, 0);
}

Rule instantiate(const Rule& rule, const Binding& binding) {
  Rule out;
  out.kind = rule.kind;
  if (rule.kind != HeadKind::Falsity) out.head = substitute(rule.head, binding);
  for (const auto& e : rule.body) {
    if (auto* lit = std::get_if<Literal>(&e)) out.body.push_back(Literal{lit->negative, substitute(lit->atom, binding)});
  }
  return out;
}

std::vector<Term> ordered_values(const Binding& binding, const std::vector<std::string>& variables) {
  std::vector<Term> out;
  out.reserve(variables.size());
  for (const auto& v : variables) out.push_back(*lookup(binding, v));
  return out;
}

void require_safe(const Rule& rule) {
  auto safety = check_safety(rule);
  if (!safety.ok()) throw SafetyError("unsafe rule: " + to_string(rule), safety.unsafe_variables);
}

void require_safe(const ExternalDecl& decl) {
  auto safety = check_safety(decl);
  if (!safety.ok()) throw SafetyError("unsafe external declaration: " + to_string(decl), safety.unsafe_variables);
}

HerbrandUniverse universe_of(const std::set<Atom>& atoms) {
  HerbrandUniverse u;
  for (const auto& a : atoms) u.add(a);
  return u;
}

SafetyResult safety_of(std::vector<std::string> variables, const Body& body) {
  std::vector<std::string> bound;
  for (const auto& e : body) {
    if (auto* lit = std::get_if<Literal>(&e); lit && !lit->negative) collect_variables(lit->atom, bound);
  }
  SafetyResult result;
  for (const auto& v : variables) {
    if (std::find(bound.begin(), bound.end(), v) == bound.end()) result.unsafe_variables.push_back(v);
  }
  std::sort(result.unsafe_variables.begin(), result.unsafe_variables.end());
  return result;
}

}  // namespace

AtomId AtomTable::intern(const Atom& atom) {
  if (!atom.is_ground()) throw std::invalid_argument("only ground atoms have ids: " + to_string(atom));
  auto [it, inserted] = ids_.try_emplace(atom, atom_id(static_cast<std::uint32_t>(atoms_.size())));
  if (inserted) atoms_.push_back(atom);
  return it->second;
}

std::optional<AtomId> AtomTable::find(const Atom& atom) const {
  auto it = ids_.find(atom);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void HerbrandUniverse::add(const Atom& atom) {
  for (const auto& t : atom.args) {
    if (!t.is_variable()) terms.insert(t);
  }
}

void HerbrandUniverse::add(const Rule& rule) {
  if (rule.kind != HeadKind::Falsity) add(rule.head);
  for (const auto& e : rule.body) {
    if (auto* lit = std::get_if<Literal>(&e)) {
      add(lit->atom);
    } else {
      const auto& c = std::get<Comparison>(e);
      if (!c.left.is_variable()) terms.insert(c.left);
      if (!c.right.is_variable()) terms.insert(c.right);
    }
  }
}

SafetyError::SafetyError(const std::string& what, std::vector<std::string> variables)
    : std::runtime_error([&] {
        std::string msg = what + " (unsafe variables:";
        for (const auto& v : variables) msg += " " + v;
        return msg + ")";
      }()),
      variables_(std::move(variables)) {}

SafetyResult check_safety(const Rule& rule) {
  std::vector<std::string> vars;
  if (rule.kind != HeadKind::Falsity) collect_variables(rule.head, vars);
  for (const auto& e : rule.body) collect_variables(e, vars);
  return safety_of(std::move(vars), rule.body);
}

SafetyResult check_safety(const ExternalDecl& decl) {
  std::vector<std::string> vars;
  collect_variables(decl.atom, vars);
  for (const auto& e : decl.condition) collect_variables(e, vars);
  return safety_of(std::move(vars), decl.condition);
}

std::set<Atom> possible_atoms(std::span<const Rule> rules, std::span<const ExternalDecl> externals,
                              const std::set<Atom>& base) {
  for (const auto& r : rules) require_safe(r);
  for (const auto& d : externals) require_safe(d);
  HerbrandUniverse universe = universe_of(base);
  for (const auto& r : rules) universe.add(r);
  for (const auto& d : externals) {
    universe.add(d.atom);
    universe.add(Rule{HeadKind::Falsity, {}, d.condition});
  }

  std::set<Atom> possible = base;
  AtomIndex index(possible);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<Atom> fresh;
    for (const auto& rule : rules) {
      if (rule.kind == HeadKind::Falsity) continue;
      match_body(rule.body, index, universe, [&](const Binding& b) { fresh.push_back(substitute(rule.head, b)); });
    }
    for (const auto& decl : externals) {
      match_body(decl.condition, index, universe, [&](const Binding& b) { fresh.push_back(substitute(decl.atom, b)); });
    }
    for (auto& a : fresh) {
      if (index.insert(a)) {
        possible.insert(std::move(a));
        changed = true;
      }
    }
  }
  return possible;
}

Program ground_rules(std::span<const Rule> rules, const HerbrandUniverse& universe, const std::set<Atom>& base) {
  for (const auto& r : rules) require_safe(r);
  std::set<Atom> possible = possible_atoms(rules, {}, base);
  AtomIndex index(possible);

  Program out;
  for (const auto& rule : rules) {
    std::vector<std::string> variables;
    if (rule.kind != HeadKind::Falsity) collect_variables(rule.head, variables);
    for (const auto& e : rule.body) collect_variables(e, variables);

    if (variables.empty()) {
      bool holds = std::all_of(rule.body.begin(), rule.body.end(), [](const BodyElement& e) {
        auto* c = std::get_if<Comparison>(&e);
        return !c || c->evaluate();
      });
      if (holds) out.rules.push_back(instantiate(rule, {}));
      continue;
    }
    std::vector<std::pair<std::vector<Term>, Rule>> instances;
    match_body(rule.body, index, universe, [&](const Binding& b) {
      instances.emplace_back(ordered_values(b, variables), instantiate(rule, b));
    });
    std::sort(instances.begin(), instances.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    instances.erase(std::unique(instances.begin(), instances.end(),
                                [](const auto& x, const auto& y) { return x.first == y.first; }),
                    instances.end());
    for (auto& inst : instances) out.rules.push_back(std::move(inst.second));
  }
  return out;
}

std::vector<Atom> ground_external(const ExternalDecl& decl, const HerbrandUniverse& universe,
                                  const std::set<Atom>& possible) {
  require_safe(decl);
  AtomIndex index(possible);
  std::set<Atom> out;
  match_body(decl.condition, index, universe, [&](const Binding& b) { out.insert(substitute(decl.atom, b)); });
  return {out.begin(), out.end()};
}

GroundRule intern_rule(const Rule& rule, AtomTable& table) {
  if (!rule.is_ground()) throw std::invalid_argument("rule is not ground: " + to_string(rule));
  GroundRule out;
  out.kind = rule.kind;
  if (rule.kind != HeadKind::Falsity) out.head = table.intern(rule.head);
  for (const auto& e : rule.body) {
    if (auto* lit = std::get_if<Literal>(&e)) {
      (lit->negative ? out.negative : out.positive).push_back(table.intern(lit->atom));
    } else {
      throw std::invalid_argument("comparisons must be evaluated by grounding: " + to_string(rule));
    }
  }
  out.normalize();
  return out;
}

std::set<Atom> atoms_of(const std::set<AtomId>& ids, const AtomTable& table) {
  std::set<Atom> out;
  for (AtomId id : ids) out.insert(table.atom(id));
  return out;
}

}  // namespace aspic
