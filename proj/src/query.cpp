#include "aspic/query.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace aspic {

namespace {

AtomId compile(const QueryExpr& query, SystemState& state, std::vector<GroundRule>& rules) {
  using Kind = QueryExpr::Kind;
  switch (query.kind) {
    case Kind::Atom: {
      AtomId atom = state.intern(query.atom);
      AtomId target = state.fresh_atom("q");
      rules.push_back(GroundRule::normal(target, {atom}));
      return target;
    }
    case Kind::Not: {
      AtomId inner = compile(QueryExpr::leaf(query.atom), state, rules);
      AtomId target = state.fresh_atom("q");
      rules.push_back(GroundRule::normal(target, {}, {inner}));
      return target;
    }
    case Kind::And: {
      std::vector<AtomId> parts;
      for (const auto& c : query.children) parts.push_back(compile(c, state, rules));
      AtomId target = state.fresh_atom("q");
      rules.push_back(GroundRule::normal(target, parts));
      return target;
    }
    case Kind::Or: {
      std::vector<AtomId> parts;
      for (const auto& c : query.children) parts.push_back(compile(c, state, rules));
      AtomId target = state.fresh_atom("q");
      for (AtomId p : parts) rules.push_back(GroundRule::normal(target, {p}));
      return target;
    }
  }
  throw std::logic_error("unknown query node");
}

void define_scaffolding(SystemState& state, std::vector<GroundRule> rules) {
  DefineResult result = state.define(std::move(rules));
  if (!result.applied) {
    // fresh heads can neither clash nor close a cycle with existing rules
    throw std::logic_error("query scaffolding was rejected by define");
  }
}

QueryAnswer guarded_query(AtomId guard, AtomId target, Mode mode, Filter filter, SystemState& state) {
  state.assert_input(guard);
  QueryAnswer answer = query_atom(target, mode, filter, state);
  state.release(guard);
  state.discard_rules_depending_on(guard);
  return answer;
}

}  // namespace

std::vector<Model> apply_filter(Filter filter, std::vector<Model> models) {
  switch (filter) {
    case Filter::Identity: return models;
  }
  return models;
}

Consolidated consolidate(std::vector<Model> models, Mode mode, Filter filter) {
  models = apply_filter(filter, std::move(models));
  Consolidated out;
  out.satisfiable = !models.empty();
  if (models.empty()) return out;
  switch (mode.kind) {
    case ModeKind::Enumerate:
      if (mode.limit != 0 && models.size() > mode.limit) models.resize(mode.limit);
      out.models = std::move(models);
      break;
    case ModeKind::Union: {
      Model all;
      for (const auto& m : models) {
        Model merged;
        std::set_union(all.begin(), all.end(), m.begin(), m.end(), std::back_inserter(merged));
        all = std::move(merged);
      }
      out.models.push_back(std::move(all));
      break;
    }
    case ModeKind::Intersection: {
      Model common = models.front();
      for (const auto& m : models) {
        Model kept;
        std::set_intersection(common.begin(), common.end(), m.begin(), m.end(), std::back_inserter(kept));
        common = std::move(kept);
      }
      out.models.push_back(std::move(common));
      break;
    }
  }
  return out;
}

CompiledQuery compile_boolean(const QueryExpr& query, SystemState& state) {
  if (!query.is_ground()) throw std::invalid_argument("Boolean queries must be ground: " + to_string(query));
  CompiledQuery out;
  out.target = compile(query, state, out.rules);
  return out;
}

std::vector<GroundRule> ext_annotate(std::vector<GroundRule> rules, AtomId guard) {
  for (auto& r : rules) {
    r.positive.push_back(guard);
    r.normalize();
  }
  return rules;
}

Model project(const Model& model, const SystemState& state) {
  Model out;
  const auto& shows = state.shows();
  for (AtomId a : model) {
    const Atom& atom = state.table().atom(a);
    if (is_reserved_name(atom.predicate)) continue;
    if (!shows.empty() && !shows.count(ShowDecl{atom.predicate, atom.arity()})) continue;
    out.push_back(a);
  }
  return out;
}

QueryAnswer query_atom(AtomId atom, Mode mode, Filter filter, const SystemState& state) {
  GroundProgram program = state.induced_program();
  const GroundLiteral positive{atom, false};
  std::size_t limit = mode.kind == ModeKind::Enumerate ? mode.limit : 0;
  SolveResult result = solve(program, std::span(&positive, 1), limit);

  QueryAnswer answer;
  answer.mode = mode.kind;
  answer.matching = result.models.size();
  Consolidated consolidated = consolidate(std::move(result.models), mode, filter);
  answer.satisfiable = consolidated.satisfiable;
  answer.verdict = consolidated.satisfiable;
  if (mode.kind == ModeKind::Intersection && answer.verdict) {
    // skeptical: no stable model may lack the atom
    const GroundLiteral negative{atom, true};
    answer.verdict = !solve(program, std::span(&negative, 1), 1).satisfiable;
  }
  for (const auto& m : consolidated.models) answer.models.push_back(project(m, state));
  return answer;
}

QueryAnswer run_boolean_query(const QueryExpr& query, Mode mode, Filter filter, SystemState& state) {
  if (!query.is_ground()) throw std::invalid_argument("Boolean queries must be ground: " + to_string(query));
  AtomId guard = state.fresh_atom("e");
  state.external(guard);
  CompiledQuery compiled = compile_boolean(query, state);
  define_scaffolding(state, ext_annotate(std::move(compiled.rules), guard));
  return guarded_query(guard, compiled.target, mode, filter, state);
}

QueryAnswer run_nonground_query(const QueryExpr& query, Mode mode, Filter filter, SystemState& state) {
  auto literals = query.conjunctive_literals();
  if (!literals) throw std::invalid_argument("non-ground queries must be conjunctions of literals");
  Rule rule;
  rule.kind = HeadKind::Atom;
  rule.head = Atom{"__query", {}};
  for (auto& lit : *literals) rule.body.emplace_back(std::move(lit));
  if (auto safety = check_safety(rule); !safety.ok()) {
    throw SafetyError("unsafe query: " + to_string(query), safety.unsafe_variables);
  }

  AtomId guard = state.fresh_atom("e");
  state.external(guard);
  AtomId target = state.fresh_atom("q");
  rule.head = state.table().atom(target);
  rule.body.emplace_back(Literal{false, state.table().atom(guard)});

  std::set<Atom> base = atoms_of(state.atom_base(), state.table());
  HerbrandUniverse universe;
  for (const auto& a : base) universe.add(a);
  universe.add(rule);
  Program ground = ground_rules(std::span(&rule, 1), universe, base);
  std::vector<GroundRule> instances;
  for (const auto& r : ground.rules) instances.push_back(intern_rule(r, state.table()));
  define_scaffolding(state, std::move(instances));
  return guarded_query(guard, target, mode, filter, state);
}

QueryAnswer run_query(const QueryExpr& query, Mode mode, Filter filter, SystemState& state) {
  if (!query.is_ground()) return run_nonground_query(query, mode, filter, state);
  if (query.is_atomic()) return query_atom(state.intern(query.atom), mode, filter, state);
  return run_boolean_query(query, mode, filter, state);
}

QueryAnswer query_by_definition(const QueryExpr& query, Mode mode, Filter filter, SystemState& state) {
  CompiledQuery compiled = compile_boolean(query, state);
  define_scaffolding(state, std::move(compiled.rules));
  return query_atom(compiled.target, mode, filter, state);
}

}  // namespace aspic
