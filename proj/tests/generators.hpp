#pragma once

// Random ground programs, system states, and Boolean queries for property
// tests. Atoms are named p0, p1, ... and interned in that order, so the
// atom named pK has id K.

#include <random>
#include <string>
#include <vector>

#include "aspic/query.hpp"
#include "aspic/state.hpp"

namespace aspic::testing {

inline Atom numbered_atom(std::uint32_t k) { return Atom{"p" + std::to_string(k), {}}; }

inline std::uint32_t pick(std::mt19937& rng, std::uint32_t bound) {
  return std::uniform_int_distribution<std::uint32_t>(0, bound - 1)(rng);
}

inline bool coin(std::mt19937& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline std::vector<AtomId> random_atoms(std::mt19937& rng, std::uint32_t atoms, std::uint32_t max_count) {
  std::vector<AtomId> out;
  std::uint32_t count = pick(rng, max_count + 1);
  for (std::uint32_t k = 0; k < count; ++k) out.push_back(atom_id(pick(rng, atoms)));
  return out;
}

/// Normal rules, choice rules, and constraints with bodies of up to two
/// positive and two negative literals.
inline GroundRule random_rule(std::mt19937& rng, std::uint32_t atoms) {
  std::vector<AtomId> pos = random_atoms(rng, atoms, 2);
  std::vector<AtomId> neg = random_atoms(rng, atoms, 2);
  AtomId head = atom_id(pick(rng, atoms));
  std::uint32_t kind = pick(rng, 10);
  if (kind < 6) return GroundRule::normal(head, pos, neg);
  if (kind < 8) return GroundRule::choice(head, pos, neg);
  if (pos.empty() && neg.empty()) pos.push_back(head);
  return GroundRule::constraint(pos, neg);
}

inline GroundProgram random_program(std::mt19937& rng, std::uint32_t atoms, std::uint32_t max_rules) {
  std::vector<GroundRule> rules;
  std::uint32_t count = 1 + pick(rng, max_rules);
  for (std::uint32_t k = 0; k < count; ++k) rules.push_back(random_rule(rng, atoms));
  return GroundProgram(std::move(rules));
}

inline void intern_numbered(SystemState& state, std::uint32_t atoms) {
  for (std::uint32_t k = 0; k < atoms; ++k) state.intern(numbered_atom(k));
}

/// A state reached by a random operator sequence, with at most `max_rules`
/// rules over `atoms` atoms.
inline SystemState random_state(std::mt19937& rng, std::uint32_t atoms = 10, std::size_t max_rules = 15) {
  SystemState state;
  intern_numbered(state, atoms);
  auto any_atom = [&] { return atom_id(pick(rng, atoms)); };
  std::uint32_t steps = 4 + pick(rng, 16);
  for (std::uint32_t s = 0; s < steps; ++s) {
    switch (pick(rng, 9)) {
      case 0:
      case 1: state.external(any_atom()); break;
      case 2: {
        std::vector<GroundRule> batch;
        std::uint32_t size = 1 + pick(rng, 4);
        for (std::uint32_t k = 0; k < size; ++k) batch.push_back(random_rule(rng, atoms));
        if (state.rules().size() + batch.size() <= max_rules) state.define(std::move(batch));
        break;
      }
      case 3: state.assert_input(any_atom()); break;
      case 4: state.open_input(any_atom()); break;
      case 5: state.retract_input(any_atom()); break;
      case 6: state.assume({any_atom(), coin(rng)}); break;
      case 7: state.cancel({any_atom(), coin(rng)}); break;
      case 8:
        if (coin(rng, 0.3) && state.rules().size() < max_rules) state.release(any_atom());
        break;
    }
  }
  // inputs get a random assignment so all three values occur
  for (AtomId a : std::set<AtomId>(state.inputs())) {
    switch (pick(rng, 3)) {
      case 0: state.assert_input(a); break;
      case 1: state.open_input(a); break;
      default: state.retract_input(a); break;
    }
  }
  return state;
}

/// A ground query tree with at most `max_leaves` leaves over atoms p0..p(atoms-1).
inline QueryExpr random_query(std::mt19937& rng, std::uint32_t atoms, std::uint32_t max_leaves) {
  if (max_leaves <= 1 || coin(rng, 0.3)) {
    Atom a = numbered_atom(pick(rng, atoms));
    return coin(rng, 0.3) ? QueryExpr::negation(std::move(a)) : QueryExpr::leaf(std::move(a));
  }
  std::uint32_t left = 1 + pick(rng, max_leaves - 1);
  std::vector<QueryExpr> children;
  children.push_back(random_query(rng, atoms, left));
  children.push_back(random_query(rng, atoms, max_leaves - left));
  return coin(rng) ? QueryExpr::conjunction(std::move(children)) : QueryExpr::disjunction(std::move(children));
}

}  // namespace aspic::testing
