#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "modal/formula.hpp"
#include "modal/path.hpp"

namespace modal {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FrameClass { K, D, T, B, S4, S5 };

std::string to_string(FrameClass c);
std::optional<FrameClass> frame_class_from_string(const std::string& s);

/// Finite Kripke model: named states, one binary relation per index element,
/// and a valuation.  Immutable after construction.
class KripkeModel {
 public:
  using PairList = std::vector<std::pair<int, int>>;  // sorted, deduplicated

  KripkeModel(std::vector<std::string> state_names,
              std::map<int, PairList> rel,
              std::map<std::string, std::set<int>> val);

  int num_states() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& state_names() const { return names_; }
  int state_id(const std::string& name) const;  // throws ModelError

  bool has_index(int i) const { return rel_.count(i) != 0; }
  std::set<int> indices() const;
  const PairList& rel(int i) const;                    // throws ModelError
  const std::vector<int>& successors(int i, int s) const;
  bool has_edge(int i, int s, int t) const;
  bool val(const std::string& prop, int s) const;

  const std::map<int, PairList>& relations() const { return rel_; }
  const std::map<std::string, std::set<int>>& valuation() const {
    return val_;
  }

  /// Strict schema: exactly the keys "states", "rel", "val"; rel keys are
  /// decimal index strings; every state mentioned must be declared.
  static KripkeModel from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> ids_;
  std::map<int, PairList> rel_;
  std::map<int, std::vector<std::vector<int>>> succ_;  // adjacency per index
  std::map<std::string, std::set<int>> val_;
};

// --- relation algebra ------------------------------------------------------

/// R(i) for a single index element.
KripkeModel::PairList compose_single(const KripkeModel& m, int i);
/// Intersection over I of the R(i).
KripkeModel::PairList compose_cap(const KripkeModel& m, const Index& I);
/// Transitive closure (>= 1 step, not reflexive) of the union over I.
KripkeModel::PairList compose_ucl(const KripkeModel& m, const Index& I);

KripkeModel::PairList transitive_closure(const KripkeModel::PairList& r,
                                         int n);
bool is_transitive(const KripkeModel::PairList& r);

// --- frame conditions ------------------------------------------------------

struct FrameViolation {
  std::string condition;  // "serial", "reflexive", ...
  int index;
  int state;              // offending state (source for serial, s for pairs)
  int other = -1;         // second state when the condition names a pair
};

bool frame_check(const KripkeModel& m, FrameClass c,
                 const std::set<int>& indices);
std::vector<FrameViolation> frame_violations(const KripkeModel& m,
                                             FrameClass c,
                                             const std::set<int>& indices);

// --- satisfaction ----------------------------------------------------------

/// Batch evaluator: computes the truth set of each (sub)formula once per
/// model, which keeps audits over large treelike models linear in edges.
class Evaluator {
 public:
  explicit Evaluator(const KripkeModel& m) : m_(m) {}
  const std::vector<bool>& truth(const Formula& f);
  bool at(int s, const Formula& f) { return truth(f)[s]; }

 private:
  const KripkeModel& m_;
  std::map<Formula, std::vector<bool>> cache_;
};

bool satisfies(const KripkeModel& m, int s, const Formula& f);
bool satisfies(const KripkeModel& m, const std::string& state,
               const Formula& f);
bool valid_on_model(const KripkeModel& m, const Formula& f);

/// Checks that every step of the path is inside the intersection relation of
/// its index, i.e. that it is a genuine path of the model.
bool is_model_path(const KripkeModel& m, const Path& p);

}  // namespace modal
