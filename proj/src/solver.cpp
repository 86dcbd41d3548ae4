#include "aspic/solver.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace aspic {

namespace {

void sort_unique(std::vector<AtomId>& atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

// Least model of the definite rules `heads[k] <- bodies[k]` by counting
// unsatisfied body atoms per rule.
Model fixpoint(std::uint32_t bound, const std::vector<AtomId>& heads,
               const std::vector<const std::vector<AtomId>*>& bodies) {
  std::vector<std::vector<std::uint32_t>> watches(bound);
  std::vector<std::size_t> missing(heads.size());
  std::vector<bool> derived(bound, false);
  std::vector<std::uint32_t> queue;
  auto derive = [&](AtomId atom) {
    auto k = index(atom);
    if (!derived[k]) {
      derived[k] = true;
      queue.push_back(k);
    }
  };
  for (std::size_t r = 0; r < heads.size(); ++r) {
    missing[r] = bodies[r]->size();
    for (AtomId a : *bodies[r]) watches[index(a)].push_back(static_cast<std::uint32_t>(r));
    if (missing[r] == 0) derive(heads[r]);
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    for (std::uint32_t r : watches[queue[q]]) {
      if (--missing[r] == 0) derive(heads[r]);
    }
  }
  Model out;
  for (std::uint32_t k = 0; k < bound; ++k) {
    if (derived[k]) out.push_back(atom_id(k));
  }
  return out;
}

enum class Value : std::uint8_t { Free, True, False };

class Search {
 public:
  Search(const GroundProgram& program, std::span<const GroundLiteral> assumptions, std::size_t limit)
      : program_(program), assumptions_(assumptions), limit_(limit) {
    std::uint32_t bound = program.atom_bound();
    for (const auto& lit : assumptions) bound = std::max(bound, index(lit.atom) + 1);
    value_.assign(bound, Value::Free);
  }

  SolveResult run() {
    result_.exhausted = true;
    if (initialize()) descend(0);
    result_.satisfiable = !result_.models.empty();
    return std::move(result_);
  }

 private:
  bool assign(std::uint32_t atom, Value v) {
    if (value_[atom] == v) return true;
    if (value_[atom] != Value::Free) return false;
    value_[atom] = v;
    trail_.push_back(atom);
    return true;
  }

  // Make the body literal on `atom` (negated if `negative`) true or false.
  bool set_literal(AtomId atom, bool negative, bool truth) {
    bool atom_true = negative ? !truth : truth;
    return assign(index(atom), atom_true ? Value::True : Value::False);
  }

  bool body_possible(const GroundRule& rule) const {
    for (AtomId a : rule.positive) {
      if (value_[index(a)] == Value::False) return false;
    }
    for (AtomId a : rule.negative) {
      if (value_[index(a)] == Value::True) return false;
    }
    return true;
  }

  // Forward propagation through one rule body.
  bool examine_rule(std::uint32_t r) {
    const GroundRule& rule = program_.rules()[r];
    std::size_t free_count = 0;
    AtomId free_atom{};
    bool free_negative = false;
    for (AtomId a : rule.positive) {
      Value v = value_[index(a)];
      if (v == Value::False) return true;
      if (v == Value::Free) {
        ++free_count;
        free_atom = a;
        free_negative = false;
      }
    }
    for (AtomId a : rule.negative) {
      Value v = value_[index(a)];
      if (v == Value::True) return true;
      if (v == Value::Free) {
        ++free_count;
        free_atom = a;
        free_negative = true;
      }
    }
    if (free_count == 0) {
      switch (rule.kind) {
        case HeadKind::Atom: return assign(index(rule.head), Value::True);
        case HeadKind::Falsity: return false;
        case HeadKind::Choice: return true;
      }
    }
    if (free_count == 1) {
      bool blocked = rule.kind == HeadKind::Falsity ||
                     (rule.kind == HeadKind::Atom && value_[index(rule.head)] == Value::False);
      if (blocked) return set_literal(free_atom, free_negative, false);
    }
    return true;
  }

  // Backward propagation: a true atom needs a rule with a possible body.
  bool examine_support(std::uint32_t atom) {
    if (value_[atom] == Value::False) return true;
    std::size_t candidates = 0;
    const GroundRule* last = nullptr;
    for (std::uint32_t r : program_.defining(atom_id(atom))) {
      const GroundRule& rule = program_.rules()[r];
      if (body_possible(rule)) {
        ++candidates;
        last = &rule;
      }
    }
    if (candidates == 0) return assign(atom, Value::False);
    if (candidates == 1 && value_[atom] == Value::True) {
      for (AtomId a : last->positive) {
        if (!assign(index(a), Value::True)) return false;
      }
      for (AtomId a : last->negative) {
        if (!assign(index(a), Value::False)) return false;
      }
    }
    return true;
  }

  bool initialize() {
    for (std::uint32_t r = 0; r < program_.rules().size(); ++r) {
      if (!examine_rule(r)) return false;
    }
    for (std::uint32_t a = 0; a < value_.size(); ++a) {
      if (!examine_support(a)) return false;
    }
    for (const auto& lit : assumptions_) {
      if (!assign(index(lit.atom), lit.negative ? Value::False : Value::True)) return false;
    }
    return true;
  }

  bool propagate() {
    while (head_ < trail_.size()) {
      std::uint32_t atom = trail_[head_++];
      AtomId id = atom_id(atom);
      for (auto occurrences : {program_.positive_occurrences(id), program_.negative_occurrences(id)}) {
        for (std::uint32_t r : occurrences) {
          if (!examine_rule(r)) return false;
          const GroundRule& rule = program_.rules()[r];
          if (rule.has_head() && !examine_support(index(rule.head))) return false;
        }
      }
      for (std::uint32_t r : program_.defining(id)) {
        if (!examine_rule(r)) return false;
      }
      if (!examine_support(atom)) return false;
    }
    return true;
  }

  void undo(std::size_t mark) {
    for (std::size_t k = mark; k < trail_.size(); ++k) value_[trail_[k]] = Value::Free;
    trail_.resize(mark);
    head_ = mark;
  }

  void descend(std::uint32_t from) {
    if (!propagate()) return;
    std::uint32_t next = from;
    while (next < value_.size() && value_[next] != Value::Free) ++next;
    if (next == value_.size()) {
      Model model;
      for (std::uint32_t a = 0; a < value_.size(); ++a) {
        if (value_[a] == Value::True) model.push_back(atom_id(a));
      }
      if (check_stable(program_, model)) {
        result_.models.push_back(std::move(model));
        if (limit_ != 0 && result_.models.size() >= limit_) {
          stop_ = true;
          result_.exhausted = false;
        }
      }
      return;
    }
    for (Value v : {Value::True, Value::False}) {
      std::size_t mark = trail_.size();
      assign(next, v);
      descend(next + 1);
      undo(mark);
      if (stop_) return;
    }
  }

  const GroundProgram& program_;
  std::span<const GroundLiteral> assumptions_;
  std::size_t limit_;
  std::vector<Value> value_;
  std::vector<std::uint32_t> trail_;
  std::size_t head_ = 0;
  bool stop_ = false;
  SolveResult result_;
};

// Stability by naive iteration of the reduct, kept apart from check_stable
// so that brute-force enumeration does not share code with the search.
bool naive_stable(const GroundProgram& program, const std::vector<bool>& in_x) {
  auto holds = [&](AtomId a) { return index(a) < in_x.size() && in_x[index(a)]; };
  std::vector<bool> derived(in_x.size(), false);
  for (const auto& rule : program.rules()) {
    if (rule.kind != HeadKind::Falsity) continue;
    bool fires = std::all_of(rule.positive.begin(), rule.positive.end(), holds) &&
                 std::none_of(rule.negative.begin(), rule.negative.end(), holds);
    if (fires) return false;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& rule : program.rules()) {
      if (rule.kind == HeadKind::Falsity) continue;
      if (std::any_of(rule.negative.begin(), rule.negative.end(), holds)) continue;
      if (rule.kind == HeadKind::Choice && !holds(rule.head)) continue;
      if (derived[index(rule.head)]) continue;
      bool body = std::all_of(rule.positive.begin(), rule.positive.end(),
                              [&](AtomId a) { return derived[index(a)]; });
      if (body) {
        derived[index(rule.head)] = true;
        changed = true;
      }
    }
  }
  return derived == in_x;
}

}  // namespace

GroundRule GroundRule::normal(AtomId head, std::vector<AtomId> pos, std::vector<AtomId> neg) {
  GroundRule r{HeadKind::Atom, head, std::move(pos), std::move(neg)};
  r.normalize();
  return r;
}

GroundRule GroundRule::choice(AtomId head, std::vector<AtomId> pos, std::vector<AtomId> neg) {
  GroundRule r{HeadKind::Choice, head, std::move(pos), std::move(neg)};
  r.normalize();
  return r;
}

GroundRule GroundRule::constraint(std::vector<AtomId> pos, std::vector<AtomId> neg) {
  GroundRule r{HeadKind::Falsity, AtomId{}, std::move(pos), std::move(neg)};
  r.normalize();
  return r;
}

void GroundRule::normalize() {
  sort_unique(positive);
  sort_unique(negative);
  if (kind == HeadKind::Falsity) head = AtomId{};
}

GroundProgram::GroundProgram(std::vector<GroundRule> rules) : rules_(std::move(rules)) {
  for (const auto& rule : rules_) {
    if (rule.has_head()) atom_bound_ = std::max(atom_bound_, index(rule.head) + 1);
    for (AtomId a : rule.positive) atom_bound_ = std::max(atom_bound_, index(a) + 1);
    for (AtomId a : rule.negative) atom_bound_ = std::max(atom_bound_, index(a) + 1);
  }
  head_of_.resize(atom_bound_);
  pos_of_.resize(atom_bound_);
  neg_of_.resize(atom_bound_);
  for (std::uint32_t r = 0; r < rules_.size(); ++r) {
    const auto& rule = rules_[r];
    if (rule.has_head()) head_of_[index(rule.head)].push_back(r);
    for (AtomId a : rule.positive) pos_of_[index(a)].push_back(r);
    for (AtomId a : rule.negative) neg_of_[index(a)].push_back(r);
  }
}

std::vector<AtomId> GroundProgram::atoms() const {
  std::vector<AtomId> out;
  for (std::uint32_t k = 0; k < atom_bound_; ++k) {
    if (!head_of_[k].empty() || !pos_of_[k].empty() || !neg_of_[k].empty()) out.push_back(atom_id(k));
  }
  return out;
}

SolveResult solve(const GroundProgram& program, std::span<const GroundLiteral> assumptions,
                  std::size_t limit) {
  return Search(program, assumptions, limit).run();
}

bool check_stable(const GroundProgram& program, const Model& candidate) {
  std::uint32_t bound = program.atom_bound();
  for (AtomId a : candidate) bound = std::max(bound, index(a) + 1);
  std::vector<bool> in_x(bound, false);
  for (AtomId a : candidate) in_x[index(a)] = true;
  auto holds = [&](AtomId a) { return in_x[index(a)]; };

  std::vector<AtomId> heads;
  std::vector<const std::vector<AtomId>*> bodies;
  for (const auto& rule : program.rules()) {
    if (std::any_of(rule.negative.begin(), rule.negative.end(), holds)) continue;
    switch (rule.kind) {
      case HeadKind::Falsity:
        if (std::all_of(rule.positive.begin(), rule.positive.end(), holds)) return false;
        break;
      case HeadKind::Choice:
        if (!holds(rule.head)) break;
        [[fallthrough]];
      case HeadKind::Atom:
        heads.push_back(rule.head);
        bodies.push_back(&rule.positive);
        break;
    }
  }
  Model sorted = candidate;
  sort_unique(sorted);
  return fixpoint(bound, heads, bodies) == sorted;
}

Model least_model(const GroundProgram& definite) {
  std::vector<AtomId> heads;
  std::vector<const std::vector<AtomId>*> bodies;
  for (const auto& rule : definite.rules()) {
    if (!rule.negative.empty() || rule.kind == HeadKind::Choice) {
      throw std::invalid_argument("least_model expects a program without negation or choice rules");
    }
    if (rule.kind == HeadKind::Atom) {
      heads.push_back(rule.head);
      bodies.push_back(&rule.positive);
    }
  }
  return fixpoint(definite.atom_bound(), heads, bodies);
}

std::vector<Model> brute_force_models(const GroundProgram& program) {
  std::vector<AtomId> atoms = program.atoms();
  if (atoms.size() > kBruteForceAtomLimit) {
    throw std::length_error("brute_force_models: " + std::to_string(atoms.size()) +
                            " atoms exceed the limit of " + std::to_string(kBruteForceAtomLimit));
  }
  std::vector<Model> out;
  std::vector<bool> in_x(program.atom_bound(), false);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms.size()); ++mask) {
    Model x;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      bool member = (mask >> k) & 1U;
      in_x[index(atoms[k])] = member;
      if (member) x.push_back(atoms[k]);
    }
    if (naive_stable(program, in_x)) out.push_back(std::move(x));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace aspic
