#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modal/construction.hpp"

namespace modal {

struct Verdict {
  enum class Kind { Sat, Unsat, Unknown };
  Kind kind;
  std::optional<KripkeModel> model;  // Sat: re-checked witness
  int state = -1;                    // Sat: witnessing state
  std::string detail;                // Unsat evidence / Unknown reason

  bool sat() const { return kind == Kind::Sat; }
  bool unsat() const { return kind == Kind::Unsat; }
  bool definite() const { return kind != Kind::Unknown; }
};

inline FrameClass frame_of(SystemId id) { return id.frame; }

struct BruteLimits {
  int max_states = 4;
  std::uint64_t budget = 200000;  // candidate models per call
};

/// Exhaustive small-model search within the frame class.  UNSAT means every
/// candidate up to max_states was enumerated and refuted; running out of
/// budget yields UNKNOWN instead.
Verdict brute_force_sat(const Formula& f, FrameClass c, BruteLimits lim = {});

struct ClosureLimits {
  int max_atoms = 512;
  std::size_t max_model_states = 20000;
};

/// The standard-model pipeline: closure, atoms, depth-bounded treelike
/// model.  SAT only with a witness that passes satisfies() and
/// frame_check(); UNSAT only when no atom contains the formula.
Verdict closure_sat(const Formula& f, SystemId logic, int depth,
                    ClosureLimits lim = {});
/// Same, with depth defaulted to modal depth + 1.
Verdict closure_sat(const Formula& f, SystemId logic, ClosureLimits lim = {});

enum class Validity { Valid, Invalid, Unknown };

struct ValidityResult {
  Validity verdict;
  std::optional<KripkeModel> witness;  // countermodel when Invalid
  int state = -1;
  std::string detail;
};

/// Valid only when both engines refute the negation; invalid on any
/// verified countermodel; unknown otherwise.
ValidityResult decide_valid(const Formula& f, SystemId logic, int depth,
                            BruteLimits oracle = {.max_states = 3},
                            ClosureLimits lim = {});

/// All formulas over one proposition with at most `max_connectives`
/// connectives (negation, implication, boxes and the indexed modalities
/// over nonempty subsets of `elements`) and modal depth <= max_depth.
std::vector<Formula> enumerate_formulas(int max_connectives, int max_depth,
                                        const Index& elements,
                                        const std::string& prop);

struct AgreementReport {
  int formulas = 0;
  int both_definite = 0;
  std::vector<std::string> disagreements;
  bool pass() const { return disagreements.empty(); }
};

/// Runs both engines over the formula list and records every pair of
/// definite verdicts that differ.
AgreementReport oracle_compare(SystemId logic,
                               const std::vector<Formula>& formulas,
                               BruteLimits brute = {},
                               ClosureLimits lim = {});

}  // namespace modal
