#pragma once

// Ground programs over dense atom ids and a stable-model enumerator.

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "aspic/syntax.hpp"

namespace aspic {

enum class AtomId : std::uint32_t {};

constexpr std::uint32_t index(AtomId atom) { return static_cast<std::uint32_t>(atom); }
constexpr AtomId atom_id(std::uint32_t value) { return static_cast<AtomId>(value); }

struct GroundLiteral {
  AtomId atom{};
  bool negative = false;

  GroundLiteral complement() const { return {atom, !negative}; }

  friend bool operator==(const GroundLiteral&, const GroundLiteral&) = default;
  friend auto operator<=>(const GroundLiteral&, const GroundLiteral&) = default;
};

/// h <- B+, not B-. Body atom lists are kept sorted and duplicate free so
/// that rules compare as sets.
struct GroundRule {
  HeadKind kind = HeadKind::Atom;
  AtomId head{};
  std::vector<AtomId> positive;
  std::vector<AtomId> negative;

  static GroundRule normal(AtomId head, std::vector<AtomId> pos = {}, std::vector<AtomId> neg = {});
  static GroundRule choice(AtomId head, std::vector<AtomId> pos = {}, std::vector<AtomId> neg = {});
  static GroundRule constraint(std::vector<AtomId> pos = {}, std::vector<AtomId> neg = {});

  bool has_head() const { return kind != HeadKind::Falsity; }
  void normalize();

  friend bool operator==(const GroundRule&, const GroundRule&) = default;
  friend auto operator<=>(const GroundRule&, const GroundRule&) = default;
};

/// Sorted set of true atoms.
using Model = std::vector<AtomId>;

class GroundProgram {
 public:
  GroundProgram() = default;
  explicit GroundProgram(std::vector<GroundRule> rules);

  std::span<const GroundRule> rules() const { return rules_; }
  /// One past the largest atom id mentioned by any rule.
  std::uint32_t atom_bound() const { return atom_bound_; }
  /// Sorted distinct atoms mentioned by the rules.
  std::vector<AtomId> atoms() const;

  std::span<const std::uint32_t> defining(AtomId atom) const { return slice(head_of_, atom); }
  std::span<const std::uint32_t> positive_occurrences(AtomId atom) const { return slice(pos_of_, atom); }
  std::span<const std::uint32_t> negative_occurrences(AtomId atom) const { return slice(neg_of_, atom); }

 private:
  std::span<const std::uint32_t> slice(const std::vector<std::vector<std::uint32_t>>& index,
                                       AtomId atom) const {
    auto k = aspic::index(atom);
    if (k >= index.size()) return {};
    return index[k];
  }

  std::vector<GroundRule> rules_;
  std::uint32_t atom_bound_ = 0;
  std::vector<std::vector<std::uint32_t>> head_of_;
  std::vector<std::vector<std::uint32_t>> pos_of_;
  std::vector<std::vector<std::uint32_t>> neg_of_;
};

struct SolveResult {
  std::vector<Model> models;
  bool satisfiable = false;
  bool exhausted = false;
};

/// Enumerates stable models that contain every positive and no negative
/// assumption atom. `limit` == 0 enumerates all. Decisions go over atoms in
/// ascending id order, true branch first, so enumeration order is fixed.
SolveResult solve(const GroundProgram& program, std::span<const GroundLiteral> assumptions,
                  std::size_t limit);

/// X is stable iff X is the least model of the reduct of the program with
/// respect to X and no constraint fires in X.
bool check_stable(const GroundProgram& program, const Model& candidate);

/// Least model of a program without negation and choice heads. Constraints
/// are ignored.
Model least_model(const GroundProgram& definite);

/// All stable models by subset enumeration, in lexicographic order. Limited
/// to 20 atoms; larger programs throw std::length_error.
std::vector<Model> brute_force_models(const GroundProgram& program);

inline constexpr std::size_t kBruteForceAtomLimit = 20;

}  // namespace aspic
