#include "modal/model.hpp"

#include <algorithm>

namespace modal {

std::string to_string(FrameClass c) {
  switch (c) {
    case FrameClass::K:
      return "K";
    case FrameClass::D:
      return "D";
    case FrameClass::T:
      return "T";
    case FrameClass::B:
      return "B";
    case FrameClass::S4:
      return "S4";
    case FrameClass::S5:
      return "S5";
  }
  return "?";
}

std::optional<FrameClass> frame_class_from_string(const std::string& s) {
  if (s == "K") return FrameClass::K;
  if (s == "D") return FrameClass::D;
  if (s == "T") return FrameClass::T;
  if (s == "B") return FrameClass::B;
  if (s == "S4") return FrameClass::S4;
  if (s == "S5") return FrameClass::S5;
  return std::nullopt;
}

KripkeModel::KripkeModel(std::vector<std::string> state_names,
                         std::map<int, PairList> rel,
                         std::map<std::string, std::set<int>> val)
    : names_(std::move(state_names)), rel_(std::move(rel)), val_(std::move(val)) {
  if (names_.empty()) throw ModelError("model needs a nonempty state set");
  for (int s = 0; s < num_states(); ++s) {
    if (!ids_.emplace(names_[s], s).second)
      throw ModelError("duplicate state name: " + names_[s]);
  }
  const int n = num_states();
  for (auto& [i, pairs] : rel_) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::vector<std::vector<int>> adj(n);
    for (auto [s, t] : pairs) {
      if (s < 0 || s >= n || t < 0 || t >= n)
        throw ModelError("relation pair out of range");
      adj[s].push_back(t);
    }
    succ_[i] = std::move(adj);
  }
  for (auto& [p, states] : val_)
    for (int s : states)
      if (s < 0 || s >= n) throw ModelError("valuation state out of range");
}

int KripkeModel::state_id(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) throw ModelError("unknown state: " + name);
  return it->second;
}

std::set<int> KripkeModel::indices() const {
  std::set<int> out;
  for (auto& [i, _] : rel_) out.insert(i);
  return out;
}

const KripkeModel::PairList& KripkeModel::rel(int i) const {
  auto it = rel_.find(i);
  if (it == rel_.end())
    throw ModelError("unknown index: " + std::to_string(i));
  return it->second;
}

const std::vector<int>& KripkeModel::successors(int i, int s) const {
  auto it = succ_.find(i);
  if (it == succ_.end())
    throw ModelError("unknown index: " + std::to_string(i));
  return it->second.at(s);
}

bool KripkeModel::has_edge(int i, int s, int t) const {
  const auto& out = successors(i, s);
  return std::binary_search(out.begin(), out.end(), t);
}

bool KripkeModel::val(const std::string& prop, int s) const {
  auto it = val_.find(prop);
  return it != val_.end() && it->second.count(s) != 0;
}

KripkeModel KripkeModel::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ModelError("model JSON must be an object");
  for (auto& [key, _] : j.items())
    if (key != "states" && key != "rel" && key != "val")
      throw ModelError("unknown key in model JSON: " + key);
  if (!j.contains("states") || !j.contains("rel") || !j.contains("val"))
    throw ModelError("model JSON needs states, rel and val");

  std::vector<std::string> names;
  for (auto& s : j.at("states")) names.push_back(s.get<std::string>());
  std::map<std::string, int> ids;
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (!ids.emplace(names[k], (int)k).second)
      throw ModelError("duplicate state name: " + names[k]);
  }
  auto lookup = [&](const std::string& name) {
    auto it = ids.find(name);
    if (it == ids.end()) throw ModelError("unknown state: " + name);
    return it->second;
  };

  std::map<int, PairList> rel;
  for (auto& [key, pairs] : j.at("rel").items()) {
    std::size_t used = 0;
    int i = 0;
    try {
      i = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || i < 0)
      throw ModelError("relation key must be a decimal index: " + key);
    PairList list;
    for (auto& pr : pairs) {
      if (!pr.is_array() || pr.size() != 2)
        throw ModelError("relation entries must be [from, to] pairs");
      list.emplace_back(lookup(pr[0].get<std::string>()),
                        lookup(pr[1].get<std::string>()));
    }
    rel[i] = std::move(list);
  }

  std::map<std::string, std::set<int>> val;
  for (auto& [prop, states] : j.at("val").items()) {
    std::set<int> where;
    for (auto& s : states) where.insert(lookup(s.get<std::string>()));
    val[prop] = std::move(where);
  }
  return KripkeModel(std::move(names), std::move(rel), std::move(val));
}

nlohmann::ordered_json KripkeModel::to_json() const {
  nlohmann::ordered_json j;
  j["states"] = names_;
  nlohmann::ordered_json rel = nlohmann::ordered_json::object();
  for (auto& [i, pairs] : rel_) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (auto [s, t] : pairs)
      list.push_back(nlohmann::ordered_json::array({names_[s], names_[t]}));
    rel[std::to_string(i)] = std::move(list);
  }
  j["rel"] = std::move(rel);
  nlohmann::ordered_json val = nlohmann::ordered_json::object();
  for (auto& [p, states] : val_) {
    std::vector<std::string> where;
    for (int s : states) where.push_back(names_[s]);
    val[p] = where;
  }
  j["val"] = std::move(val);
  return j;
}

// --- relation algebra ------------------------------------------------------

KripkeModel::PairList compose_single(const KripkeModel& m, int i) {
  return m.rel(i);
}

KripkeModel::PairList compose_cap(const KripkeModel& m, const Index& I) {
  KripkeModel::PairList out = m.rel(I.elems().front());
  for (std::size_t k = 1; k < I.elems().size(); ++k) {
    const auto& next = m.rel(I.elems()[k]);
    KripkeModel::PairList keep;
    std::set_intersection(out.begin(), out.end(), next.begin(), next.end(),
                          std::back_inserter(keep));
    out = std::move(keep);
  }
  return out;
}

KripkeModel::PairList transitive_closure(const KripkeModel::PairList& r,
                                         int n) {
  // Per-source BFS; fine for both small models and treelike audit models.
  std::vector<std::vector<int>> adj(n);
  for (auto [s, t] : r) adj[s].push_back(t);
  KripkeModel::PairList out;
  std::vector<int> mark(n, -1);
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    stack.assign(adj[s].begin(), adj[s].end());
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      if (mark[t] == s) continue;
      mark[t] = s;
      out.emplace_back(s, t);
      for (int u : adj[t]) stack.push_back(u);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

KripkeModel::PairList compose_ucl(const KripkeModel& m, const Index& I) {
  KripkeModel::PairList uni;
  for (int i : I.elems()) {
    const auto& r = m.rel(i);
    uni.insert(uni.end(), r.begin(), r.end());
  }
  std::sort(uni.begin(), uni.end());
  uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
  return transitive_closure(uni, m.num_states());
}

bool is_transitive(const KripkeModel::PairList& r) {
  std::map<int, std::vector<int>> adj;
  for (auto [s, t] : r) adj[s].push_back(t);
  for (auto [s, t] : r)
    for (int u : adj[t])
      if (!std::binary_search(r.begin(), r.end(), std::make_pair(s, u)))
        return false;
  return true;
}

// --- frame conditions ------------------------------------------------------

namespace {

void check_relation(const KripkeModel& m, FrameClass c, int i,
                    std::vector<FrameViolation>& out) {
  const auto& r = m.rel(i);
  const int n = m.num_states();
  auto has = [&](int s, int t) {
    return std::binary_search(r.begin(), r.end(), std::make_pair(s, t));
  };
  switch (c) {
    case FrameClass::K:
      return;
    case FrameClass::D:
      for (int s = 0; s < n; ++s)
        if (m.successors(i, s).empty()) out.push_back({"serial", i, s});
      return;
    case FrameClass::T:
      for (int s = 0; s < n; ++s)
        if (!has(s, s)) out.push_back({"reflexive", i, s});
      return;
    case FrameClass::B:
      check_relation(m, FrameClass::T, i, out);
      for (auto [s, t] : r)
        if (!has(t, s)) out.push_back({"symmetric", i, s, t});
      return;
    case FrameClass::S4:
      check_relation(m, FrameClass::T, i, out);
      for (auto [s, t] : r)
        for (int u : m.successors(i, t))
          if (!has(s, u)) out.push_back({"transitive", i, s, u});
      return;
    case FrameClass::S5:
      check_relation(m, FrameClass::B, i, out);
      for (auto [s, t] : r)
        for (int u : m.successors(i, t))
          if (!has(s, u)) out.push_back({"transitive", i, s, u});
      return;
  }
}

}  // namespace

std::vector<FrameViolation> frame_violations(const KripkeModel& m,
                                             FrameClass c,
                                             const std::set<int>& indices) {
  std::vector<FrameViolation> out;
  for (int i : indices) check_relation(m, c, i, out);
  return out;
}

bool frame_check(const KripkeModel& m, FrameClass c,
                 const std::set<int>& indices) {
  // Probe each index first so unknown indices error out even when an
  // earlier relation already violates the class.
  for (int i : indices) (void)m.rel(i);
  return frame_violations(m, c, indices).empty();
}

// --- satisfaction ----------------------------------------------------------

const std::vector<bool>& Evaluator::truth(const Formula& f) {
  auto it = cache_.find(f);
  if (it != cache_.end()) return it->second;

  const int n = m_.num_states();
  std::vector<bool> v(n, false);
  switch (f.kind()) {
    case Kind::Prop:
      for (int s = 0; s < n; ++s) v[s] = m_.val(f.prop_name(), s);
      break;
    case Kind::Neg: {
      const auto& c = truth(f.child());
      for (int s = 0; s < n; ++s) v[s] = !c[s];
      break;
    }
    case Kind::Impl: {
      const auto& a = truth(f.lhs());
      const auto& b = truth(f.rhs());
      for (int s = 0; s < n; ++s) v[s] = !a[s] || b[s];
      break;
    }
    case Kind::Box: {
      const auto& c = truth(f.child());
      for (int s = 0; s < n; ++s) {
        bool all = true;
        for (int t : m_.successors(f.box_index(), s))
          if (!c[t]) {
            all = false;
            break;
          }
        v[s] = all;
      }
      break;
    }
    case Kind::Cap: {
      const auto& c = truth(f.child());
      const Index& I = f.index();
      int first = I.elems().front();
      for (int s = 0; s < n; ++s) {
        bool all = true;
        for (int t : m_.successors(first, s)) {
          bool in_cap = true;
          for (std::size_t k = 1; k < I.elems().size() && in_cap; ++k)
            in_cap = m_.has_edge(I.elems()[k], s, t);
          if (in_cap && !c[t]) {
            all = false;
            break;
          }
        }
        v[s] = all;
      }
      break;
    }
    case Kind::Ucl: {
      // s satisfies [+I]phi iff s cannot reach a ~phi state in >= 1 step
      // along the union of the R(i).  Backward fixpoint from the bad set.
      const auto& c = truth(f.child());
      std::vector<std::vector<int>> radj(n);
      for (int i : f.index().elems())
        for (auto [s, t] : m_.rel(i)) radj[t].push_back(s);
      std::vector<bool> reaches_bad(n, false);
      std::vector<int> work;
      for (int t = 0; t < n; ++t)
        if (!c[t]) work.push_back(t);
      while (!work.empty()) {
        int t = work.back();
        work.pop_back();
        for (int s : radj[t])
          if (!reaches_bad[s]) {
            reaches_bad[s] = true;
            work.push_back(s);
          }
      }
      for (int s = 0; s < n; ++s) v[s] = !reaches_bad[s];
      break;
    }
  }
  return cache_.emplace(f, std::move(v)).first->second;
}

bool satisfies(const KripkeModel& m, int s, const Formula& f) {
  if (s < 0 || s >= m.num_states()) throw ModelError("state out of range");
  for (int i : f.index_elements()) (void)m.rel(i);  // unknown index -> error
  Evaluator ev(m);
  return ev.at(s, f);
}

bool satisfies(const KripkeModel& m, const std::string& state,
               const Formula& f) {
  return satisfies(m, m.state_id(state), f);
}

bool valid_on_model(const KripkeModel& m, const Formula& f) {
  for (int i : f.index_elements()) (void)m.rel(i);
  Evaluator ev(m);
  const auto& v = ev.truth(f);
  for (int s = 0; s < m.num_states(); ++s)
    if (!v[s]) return false;
  return true;
}

bool is_model_path(const KripkeModel& m, const Path& p) {
  for (std::size_t x = 0; x < p.length(); ++x)
    for (int i : p.indices[x].elems())
      if (!m.has_edge(i, p.states[x], p.states[x + 1])) return false;
  return true;
}

}  // namespace modal
