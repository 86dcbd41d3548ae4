#pragma once

// Query answering over a system state: entailment modes, model filters,
// Boolean query compilation, and the external/define/assert/release
// protocol that evaluates compiled queries without leaving traces in the
// visible semantics.

#include <optional>
#include <vector>

#include "aspic/state.hpp"
#include "aspic/syntax.hpp"

namespace aspic {

enum class ModeKind : std::uint8_t { Enumerate, Union, Intersection };

struct Mode {
  ModeKind kind = ModeKind::Enumerate;
  std::size_t limit = 1;  // models to enumerate, 0 for all

  static Mode enumerate(std::size_t n) { return {ModeKind::Enumerate, n}; }
  static Mode brave() { return {ModeKind::Union, 0}; }
  static Mode cautious() { return {ModeKind::Intersection, 0}; }
};

enum class Filter : std::uint8_t { Identity };

std::vector<Model> apply_filter(Filter filter, std::vector<Model> models);

struct Consolidated {
  std::vector<Model> models;  // enumerate: as given; union/intersection: one set
  bool satisfiable = false;   // false for an intersection over no models
};

/// Filter first, then mode.
Consolidated consolidate(std::vector<Model> models, Mode mode, Filter filter);

struct QueryAnswer {
  bool verdict = false;
  bool satisfiable = false;
  ModeKind mode = ModeKind::Enumerate;
  /// Matching models after projection (enumerate), or the single
  /// consolidated set (union/intersection, when satisfiable).
  std::vector<Model> models;
  /// Number of matching models before projection and limits.
  std::size_t matching = 0;
};

struct CompiledQuery {
  std::vector<GroundRule> rules;
  AtomId target{};
};

/// Q(phi): one fresh target per subformula, children before parents.
CompiledQuery compile_boolean(const QueryExpr& query, SystemState& state);

/// Adds `guard` to the positive body of every rule.
std::vector<GroundRule> ext_annotate(std::vector<GroundRule> rules, AtomId guard);

/// Atomic query: solve P(S) with `atom` as an assumption.
QueryAnswer query_atom(AtomId atom, Mode mode, Filter filter, const SystemState& state);

/// Dispatches on the query shape: atomic ground queries use an assumption,
/// Boolean ground queries the compiled protocol, non-ground queries the
/// conjunctive protocol. The state ends up with the guard atom released.
QueryAnswer run_query(const QueryExpr& query, Mode mode, Filter filter, SystemState& state);

QueryAnswer run_boolean_query(const QueryExpr& query, Mode mode, Filter filter, SystemState& state);

/// Existential conjunctive query; throws SafetyError when unsafe.
QueryAnswer run_nonground_query(const QueryExpr& query, Mode mode, Filter filter, SystemState& state);

/// Evaluates a ground Boolean query by defining Q(phi) permanently in
/// `state` and asking for its target.
QueryAnswer query_by_definition(const QueryExpr& query, Mode mode, Filter filter, SystemState& state);

/// Keeps atoms of shown predicates (all when there is no show directive)
/// and drops reserved atoms.
Model project(const Model& model, const SystemState& state);

}  // namespace aspic
