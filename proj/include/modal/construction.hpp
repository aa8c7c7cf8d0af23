#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "modal/closure.hpp"
#include "modal/model.hpp"
#include "modal/path.hpp"

namespace modal {

/// The maximal locally coherent subsets of cl(sigma): the computable
/// stand-in for the maximal consistent sets.  An atom decides every
/// non-negated member of the closure; negated members follow by parity of
/// leading negations.  Atoms are numbered in a fixed order (ascending bit
/// patterns over the sorted positives), so ids are reproducible.
class AtomSet {
 public:
  explicit AtomSet(ClosureSet cl);

  const ClosureSet& closure_set() const { return cl_; }
  const Signature& signature() const { return cl_.signature(); }
  int count() const { return static_cast<int>(atoms_.size()); }

  /// Membership of a closure formula in an atom.  Throws std::out_of_range
  /// if f (after stripping leading negations) is not in the closure.
  bool contains(int atom, const Formula& f) const;

  /// The decided positives of an atom, in the closure's sorted order.
  std::vector<Formula> positives_of(int atom) const;
  /// Full member listing (positives and the negations of the rest).
  std::vector<Formula> members_of(int atom) const;

 private:
  ClosureSet cl_;
  std::map<Formula, int> pos_index_;
  std::vector<std::vector<bool>> atoms_;  // bit per closure positive
};

/// The finitary canonical relation on atoms for an index I, shaped per the
/// signature's logic, with the uniform ucl-transfer side condition.
KripkeModel::PairList canonical_relation(const AtomSet& atoms, const Index& I);

/// The depth-bounded treelike model: states are the canonical paths of
/// length at most `depth`, relations per the logic's standard-relation
/// clause, valuation read off the tails.
struct StandardModel {
  Signature sig;
  AtomSet atoms;
  int depth;
  std::vector<Path> paths;  // aligned with the model's state ids
  KripkeModel model;

  /// Interior states are those of length < depth; only they carry the
  /// truth- and existence-lemma guarantees.
  bool is_interior(int state) const {
    return static_cast<int>(paths[state].length()) < depth;
  }
};

int default_depth(const Formula& alpha);

/// Throws ModelError if the state count would exceed max_states (0 = no
/// limit); the treelike domain grows geometrically with depth.
StandardModel build_standard_model(const AtomSet& atoms, int depth,
                                   std::size_t max_states = 0);

// --- audits ----------------------------------------------------------------

struct AuditReport {
  std::string audit;
  std::vector<std::string> violations;        // hard failures
  std::vector<std::string> expected;          // known frontier artifacts
  std::vector<std::string> notes;
  bool pass() const { return violations.empty(); }
  nlohmann::ordered_json to_json() const;
};

/// The per-logic relational properties of the canonical
/// relations plus monotonicity (J containing I implies the J-relation is
/// included in the I-relation).
AuditReport audit_canonicity(const AtomSet& atoms);

/// Frame conditions of the logic's frame class on the built model.  For
/// serial logics, missing successors at frontier states are reported under
/// `expected`, not as violations.
AuditReport audit_standardness(const StandardModel& m);

/// Truth lemma: membership in tail(s) coincides with truth at s, for every
/// closure formula and every interior state.
AuditReport audit_truth(const StandardModel& m);

/// Existence lemma at interior states: an absent cap-formula has a
/// refuting cap-successor, an absent ucl-formula a refuting ucl-successor.
AuditReport audit_existence(const StandardModel& m);

}  // namespace modal
