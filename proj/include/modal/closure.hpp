#pragma once

#include <set>
#include <string>
#include <vector>

#include "modal/formula.hpp"
#include "modal/proof.hpp"

namespace modal {

/// Signature sigma = (logic, alpha, iota): the seed of the finitary
/// construction.  The axiom system is determined by the logic, so it is not
/// stored separately.
struct Signature {
  SystemId logic;  // always at the full language level
  Formula alpha;
  Index iota;

  /// Throws std::invalid_argument unless every index element occurring in
  /// alpha is a member of iota and the logic is a full-language system.
  static Signature make(SystemId logic, Formula alpha, Index iota);
};

/// How to read the quantifiers of closure condition 6.  The strict reading
/// takes the outer binder literally (J a proper superset of I inside iota);
/// the default widens J to every subset of iota meeting I, which is what the
/// truth lemma's recursion step actually consumes.
enum class Closure6 { MeetingIndices, StrictSupersets };

class ClosureSet {
 public:
  ClosureSet(Signature sig, std::set<Formula> members);

  const Signature& signature() const { return sig_; }
  const std::set<Formula>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(const Formula& f) const { return members_.count(f) != 0; }

  /// Members sorted by canonical rendering; the deterministic order used by
  /// atom bitsets and all emitted listings.
  const std::vector<Formula>& sorted() const { return sorted_; }

  /// The non-negated members in the sorted order.  An atom decides exactly
  /// these; negated members follow by parity.
  const std::vector<Formula>& positives() const { return positives_; }

 private:
  Signature sig_;
  std::set<Formula> members_;
  std::vector<Formula> sorted_;
  std::vector<Formula> positives_;
};

/// Least fixpoint of the six closure conditions.
ClosureSet closure(const Signature& sig,
                   Closure6 mode = Closure6::MeetingIndices);

/// All nonempty subsets of iota, sorted; shared by closure, atoms and the
/// standard-model builder.
std::vector<Index> nonempty_subsets(const Index& iota);

}  // namespace modal
