#include "aspic/state.hpp"

#include <algorithm>
#include <functional>

namespace aspic {

Truth Assignment3::value(AtomId atom) const {
  auto it = values_.find(atom);
  return it == values_.end() ? default_ : it->second;
}

void Assignment3::set(AtomId atom, Truth value) {
  if (value == default_) {
    values_.erase(atom);
  } else {
    values_[atom] = value;
  }
}

std::set<AtomId> Assignment3::characteristic(Truth value) const {
  std::set<AtomId> out;
  for (const auto& [atom, v] : values_) {
    if (v == value) out.insert(atom);
  }
  return out;
}

namespace {

std::set<AtomId> heads_of(std::span<const GroundRule> rules) {
  std::set<AtomId> out;
  for (const auto& r : rules) {
    if (r.has_head()) out.insert(r.head);
  }
  return out;
}

// Tarjan's algorithm over the positive dependency graph; calls `visit` with
// each strongly connected component.
void positive_components(std::span<const GroundRule> rules,
                         const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
  std::uint32_t bound = 0;
  for (const auto& r : rules) {
    if (r.has_head()) bound = std::max(bound, index(r.head) + 1);
    for (AtomId a : r.positive) bound = std::max(bound, index(a) + 1);
  }
  std::vector<std::vector<std::uint32_t>> edges(bound);
  for (const auto& r : rules) {
    if (!r.has_head()) continue;
    for (AtomId a : r.positive) edges[index(r.head)].push_back(index(a));
  }

  constexpr std::uint32_t unvisited = UINT32_MAX;
  std::vector<std::uint32_t> order(bound, unvisited);
  std::vector<std::uint32_t> low(bound, 0);
  std::vector<bool> on_stack(bound, false);
  std::vector<std::uint32_t> stack;
  std::uint32_t counter = 0;

  // explicit call stack: (node, next edge position)
  std::vector<std::pair<std::uint32_t, std::size_t>> frames;
  for (std::uint32_t root = 0; root < bound; ++root) {
    if (order[root] != unvisited) continue;
    frames.emplace_back(root, 0);
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [node, pos] = frames.back();
      if (pos < edges[node].size()) {
        std::uint32_t next = edges[node][pos++];
        if (order[next] == unvisited) {
          order[next] = low[next] = counter++;
          stack.push_back(next);
          on_stack[next] = true;
          frames.emplace_back(next, 0);
        } else if (on_stack[next]) {
          low[node] = std::min(low[node], order[next]);
        }
        continue;
      }
      std::uint32_t done = node;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == order[done]) {
        std::vector<std::uint32_t> component;
        std::uint32_t member = 0;
        do {
          member = stack.back();
          stack.pop_back();
          on_stack[member] = false;
          component.push_back(member);
        } while (member != done);
        visit(component);
      }
    }
  }
}

}  // namespace

Composition compositional(std::span<const GroundRule> first, std::span<const GroundRule> second) {
  std::set<AtomId> first_heads = heads_of(first);
  std::set<AtomId> second_heads = heads_of(second);
  for (AtomId a : second_heads) {
    if (first_heads.count(a)) return {Composition::Verdict::SharedHead, a};
  }
  std::vector<GroundRule> joint(first.begin(), first.end());
  joint.insert(joint.end(), second.begin(), second.end());
  Composition result;
  positive_components(joint, [&](const std::vector<std::uint32_t>& component) {
    if (!result.ok()) return;
    std::optional<AtomId> in_first;
    std::optional<AtomId> in_second;
    for (std::uint32_t k : component) {
      if (first_heads.count(atom_id(k))) in_first = atom_id(k);
      if (second_heads.count(atom_id(k))) in_second = atom_id(k);
    }
    if (in_first && in_second) result = {Composition::Verdict::PositiveCycle, *in_second};
  });
  return result;
}

std::vector<GroundRule> confine(std::span<const GroundRule> program, const std::set<AtomId>& inputs) {
  std::set<AtomId> base = heads_of(program);
  base.insert(inputs.begin(), inputs.end());
  auto in_base = [&](AtomId a) { return base.count(a) != 0; };
  std::vector<GroundRule> out;
  for (const auto& r : program) {
    if (!std::all_of(r.positive.begin(), r.positive.end(), in_base)) continue;
    GroundRule kept = r;
    std::erase_if(kept.negative, [&](AtomId a) { return !in_base(a); });
    out.push_back(std::move(kept));
  }
  return out;
}

bool SystemState::assume(GroundLiteral literal) {
  Truth target = literal.negative ? Truth::False : Truth::True;
  if (assumed_.value(literal.atom) == target) return false;
  assumed_.set(literal.atom, target);
  return true;
}

bool SystemState::cancel(GroundLiteral literal) {
  // cancel(a) clears a from j^t only, cancel(not a) clears it from j^f only
  Truth held = literal.negative ? Truth::False : Truth::True;
  if (assumed_.value(literal.atom) != held) return false;
  assumed_.erase(literal.atom);
  return true;
}

bool SystemState::assert_input(AtomId atom) {
  if (!inputs_.count(atom)) return false;
  bool changed = input_.value(atom) != Truth::True;
  input_.set(atom, Truth::True);
  return changed;
}

bool SystemState::open_input(AtomId atom) {
  if (!inputs_.count(atom)) return false;
  bool changed = input_.value(atom) != Truth::Undefined;
  input_.set(atom, Truth::Undefined);
  return changed;
}

bool SystemState::retract_input(AtomId atom) {
  if (!inputs_.count(atom)) return false;
  bool changed = input_.value(atom) != Truth::False;
  input_.erase(atom);
  return changed;
}

DefineResult SystemState::define(std::vector<GroundRule> rules) {
  for (auto& r : rules) r.normalize();
  DefineResult result;
  result.composition = compositional(rules_, rules);
  if (!result.composition.ok()) return result;

  std::vector<GroundRule> joint = rules_;
  std::set<GroundRule> seen = rule_set_;
  for (auto& r : rules) {
    if (seen.insert(r).second) joint.push_back(std::move(r));
  }
  std::size_t before = rules_.size();
  rules_.clear();
  rule_set_.clear();
  for (auto& r : confine(joint, inputs_)) add_rule(std::move(r));

  for (AtomId h : heads()) {
    if (inputs_.erase(h)) input_.erase(h);
  }
  result.applied = true;
  result.rules_added = rules_.size() - std::min(before, rules_.size());
  return result;
}

bool SystemState::external(AtomId atom) {
  if (inputs_.count(atom)) return false;
  for (const auto& r : rules_) {
    if (r.has_head() && r.head == atom) return false;
  }
  inputs_.insert(atom);
  return true;
}

bool SystemState::release(AtomId atom) {
  if (!inputs_.count(atom)) return false;
  add_rule(GroundRule::normal(atom, {atom}));
  inputs_.erase(atom);
  input_.erase(atom);
  released_.insert(atom);
  return true;
}

std::vector<GroundRule> SystemState::induced_rules() const {
  std::vector<GroundRule> out = rules_;
  for (const auto& [atom, value] : input_.entries()) {
    out.push_back(value == Truth::True ? GroundRule::normal(atom) : GroundRule::choice(atom));
  }
  for (const auto& [atom, value] : assumed_.entries()) {
    out.push_back(value == Truth::True ? GroundRule::constraint({}, {atom}) : GroundRule::constraint({atom}));
  }
  return out;
}

void SystemState::discard_rules_depending_on(AtomId atom) {
  GroundRule guard = GroundRule::normal(atom, {atom});
  std::erase_if(rules_, [&](const GroundRule& r) {
    return r != guard && std::binary_search(r.positive.begin(), r.positive.end(), atom);
  });
  rule_set_ = std::set<GroundRule>(rules_.begin(), rules_.end());
}

std::set<AtomId> SystemState::heads() const { return heads_of(rules_); }

std::set<AtomId> SystemState::atom_base() const {
  std::set<AtomId> out = heads();
  out.insert(inputs_.begin(), inputs_.end());
  return out;
}

std::set<AtomId> SystemState::possible_atoms() const {
  std::vector<GroundRule> positive;
  for (const auto& r : rules_) {
    if (r.has_head()) positive.push_back(GroundRule::normal(r.head, r.positive));
  }
  for (AtomId a : inputs_) positive.push_back(GroundRule::normal(a));
  Model derived = least_model(GroundProgram(std::move(positive)));
  return {derived.begin(), derived.end()};
}

Truth SystemState::input_value(AtomId atom) const {
  return inputs_.count(atom) ? input_.value(atom) : Truth::False;
}

StateDigest SystemState::digest() const {
  StateDigest d;
  d.rules = rules_.size();
  d.inputs = inputs_.size();
  d.input_true = input_.characteristic(Truth::True).size();
  d.input_undefined = input_.characteristic(Truth::Undefined).size();
  d.assumed_true = assumed_.characteristic(Truth::True).size();
  d.assumed_false = assumed_.characteristic(Truth::False).size();
  return d;
}

AtomId SystemState::fresh_atom(std::string_view stem) {
  while (true) {
    Atom candidate{"__" + std::string(stem) + std::to_string(++fresh_counter_), {}};
    if (!table_.find(candidate)) return table_.intern(candidate);
  }
}

bool SystemState::same_quadruple(const SystemState& other) const {
  return rule_set_ == other.rule_set_ && inputs_ == other.inputs_ && input_ == other.input_ &&
         assumed_ == other.assumed_;
}

void SystemState::add_rule(GroundRule rule) {
  rule.normalize();
  if (rule_set_.insert(rule).second) rules_.push_back(std::move(rule));
}

std::string to_string(const GroundRule& rule, const AtomTable& table) {
  Rule r;
  r.kind = rule.kind;
  if (rule.has_head()) r.head = table.atom(rule.head);
  for (AtomId a : rule.positive) r.body.push_back(Literal{false, table.atom(a)});
  for (AtomId a : rule.negative) r.body.push_back(Literal{true, table.atom(a)});
  return to_string(r);
}

std::string dump_state(const SystemState& state) {
  const AtomTable& table = state.table();
  auto letter = [](Truth t) {
    switch (t) {
      case Truth::True: return "t";
      case Truth::False: return "f";
      case Truth::Undefined: return "u";
    }
    return "?";
  };
  std::string out = "% R\n";
  for (const auto& r : state.rules()) out += to_string(r, table) + "\n";
  out += "% I\n";
  for (AtomId a : state.inputs()) out += "#external " + table.name(a) + ".\n";
  out += "% i\n";
  for (AtomId a : state.inputs()) out += "% " + table.name(a) + " = " + letter(state.input_value(a)) + "\n";
  out += "% j\n";
  for (const auto& [a, v] : state.assumptions().entries()) out += "% " + table.name(a) + " = " + letter(v) + "\n";
  if (!state.shows().empty()) {
    out += "% show\n";
    for (const auto& s : state.shows()) out += to_string(s) + "\n";
  }
  if (!state.released().empty()) {
    out += "% released\n";
    for (AtomId a : state.released()) out += "% " + table.name(a) + "\n";
  }
  return out;
}

}  // namespace aspic
