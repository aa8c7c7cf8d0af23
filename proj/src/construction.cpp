#include "modal/construction.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace modal {

namespace {

struct Lit {
  int idx;
  bool neg;
};

bool lit_val(std::uint32_t mask, Lit l) {
  return (((mask >> l.idx) & 1u) != 0) != l.neg;
}

}  // namespace

// ---------------------------------------------------------------------------
// AtomSet
// ---------------------------------------------------------------------------

struct AtomConstraints {
  // c <-> (!a || b), the Boolean reading of an implication member.
  struct Equiv3 {
    Lit c, a, b;
  };
  struct Iff {
    Lit a, b;
  };
  struct Implies {
    Lit a, b;
  };
  std::vector<Equiv3> equivs;
  std::vector<Iff> iffs;
  std::vector<Implies> implications;

  bool ok(std::uint32_t mask) const {
    for (const auto& e : equivs)
      if (lit_val(mask, e.c) != (!lit_val(mask, e.a) || lit_val(mask, e.b)))
        return false;
    for (const auto& f : iffs)
      if (lit_val(mask, f.a) != lit_val(mask, f.b)) return false;
    for (const auto& i : implications)
      if (lit_val(mask, i.a) && !lit_val(mask, i.b)) return false;
    return true;
  }
};

namespace {

class LitTable {
 public:
  explicit LitTable(const std::vector<Formula>& positives) {
    for (std::size_t k = 0; k < positives.size(); ++k)
      index_.emplace(positives[k], static_cast<int>(k));
  }

  /// Strips leading negations; parity becomes the literal's sign.
  Lit lit(Formula f) const {
    bool neg = false;
    while (f.is(Kind::Neg)) {
      neg = !neg;
      f = f.child();
    }
    auto it = index_.find(f);
    if (it == index_.end())
      throw std::out_of_range("formula not in the closure: " + render(f));
    return {it->second, neg};
  }

 private:
  std::map<Formula, int> index_;
};

AtomConstraints compile_constraints(const ClosureSet& cl, const LitTable& lt) {
  const Signature& sig = cl.signature();
  const bool reflexive_logic = sig.logic.frame == FrameClass::T ||
                               sig.logic.frame == FrameClass::B ||
                               sig.logic.frame == FrameClass::S4 ||
                               sig.logic.frame == FrameClass::S5;
  const std::vector<Index> subsets = nonempty_subsets(sig.iota);

  AtomConstraints c;
  for (const Formula& f : cl.positives()) {
    Lit self = lt.lit(f);
    switch (f.kind()) {
      case Kind::Impl:
        c.equivs.push_back({self, lt.lit(f.lhs()), lt.lit(f.rhs())});
        break;
      case Kind::Cap: {
        const Index& I = f.index();
        if (I.is_singleton() && sig.iota.contains(I.elems().front()))
          c.iffs.push_back(
              {self, lt.lit(Formula::box(I.elems().front(), f.child()))});
        for (const Index& J : subsets) {
          if (!I.proper_subset_of(J)) continue;
          Formula wide = Formula::cap(J, f.child());
          if (cl.contains(wide)) c.implications.push_back({self, lt.lit(wide)});
        }
        if (reflexive_logic) c.implications.push_back({self, lt.lit(f.child())});
        break;
      }
      case Kind::Ucl: {
        for (const Index& J : subsets) {
          if (!J.intersects(f.index())) continue;
          Formula guard = Formula::cap(J, f);
          if (cl.contains(guard))
            c.implications.push_back({self, lt.lit(guard)});
          // ucl_I phi -> cap_J phi for J meeting I, via ucl-1 then the
          // cap1/cap2 widening chain; spurious atoms dropping it break the
          // existence lemma.
          Formula once = Formula::cap(J, f.child());
          if (cl.contains(once)) c.implications.push_back({self, lt.lit(once)});
        }
        if (reflexive_logic) c.implications.push_back({self, lt.lit(f.child())});
        break;
      }
      default:
        break;
    }
  }
  return c;
}

}  // namespace

AtomSet::AtomSet(ClosureSet cl) : cl_(std::move(cl)) {
  const std::vector<Formula>& pos = cl_.positives();
  if (pos.size() > 24)
    throw std::runtime_error("closure too large for atom enumeration (" +
                             std::to_string(pos.size()) + " positives)");
  for (std::size_t k = 0; k < pos.size(); ++k)
    pos_index_.emplace(pos[k], static_cast<int>(k));
  LitTable lt(pos);
  AtomConstraints constraints = compile_constraints(cl_, lt);
  const std::uint32_t total = 1u << pos.size();
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    if (!constraints.ok(mask)) continue;
    std::vector<bool> bits(pos.size());
    for (std::size_t k = 0; k < pos.size(); ++k) bits[k] = (mask >> k) & 1u;
    atoms_.push_back(std::move(bits));
  }
}

bool AtomSet::contains(int atom, const Formula& f) const {
  bool neg = false;
  Formula g = f;
  while (g.is(Kind::Neg)) {
    neg = !neg;
    g = g.child();
  }
  auto it = pos_index_.find(g);
  if (it == pos_index_.end())
    throw std::out_of_range("formula not in the closure: " + render(g));
  bool bit = atoms_[atom][static_cast<std::size_t>(it->second)];
  return bit != neg;
}

std::vector<Formula> AtomSet::positives_of(int atom) const {
  std::vector<Formula> out;
  const std::vector<Formula>& pos = cl_.positives();
  for (std::size_t k = 0; k < pos.size(); ++k)
    if (atoms_[atom][k]) out.push_back(pos[k]);
  return out;
}

std::vector<Formula> AtomSet::members_of(int atom) const {
  std::vector<Formula> out;
  const std::vector<Formula>& pos = cl_.positives();
  for (std::size_t k = 0; k < pos.size(); ++k)
    out.push_back(atoms_[atom][k] ? pos[k] : Formula::neg(pos[k]));
  return out;
}

// ---------------------------------------------------------------------------
// Canonical relations
// ---------------------------------------------------------------------------

KripkeModel::PairList canonical_relation(const AtomSet& atoms,
                                         const Index& I) {
  const ClosureSet& cl = atoms.closure_set();
  const FrameClass frame = atoms.signature().logic.frame;

  std::vector<Formula> caps_I;    // closure members of the form cap_I phi
  std::vector<Formula> caps_sub;  // cap_J phi with J a subset of I
  std::vector<Formula> ucls;      // members ucl_K phi with K meeting I
  for (const Formula& f : cl.positives()) {
    if (f.is(Kind::Cap) && f.index() == I) caps_I.push_back(f);
    if (f.is(Kind::Cap) && f.index().subset_of(I)) caps_sub.push_back(f);
    if (f.is(Kind::Ucl) && f.index().intersects(I)) ucls.push_back(f);
  }

  auto content_forward = [&](int a, int b) {
    for (const Formula& c : caps_I)
      if (atoms.contains(a, c) && !atoms.contains(b, c.child())) return false;
    return true;
  };
  // The boxed transfer ranges over every sub-index of I.  With full MCS the
  // sub-index cases follow from 4/5-cap via formulas outside cl(sigma); on
  // syntactic atoms they must be imposed to keep the relations monotone.
  auto capset_leq = [&](int a, int b) {
    for (const Formula& c : caps_sub)
      if (atoms.contains(a, c) && !atoms.contains(b, c)) return false;
    return true;
  };
  auto ucl_transfer = [&](int a, int b) {
    for (const Formula& u : ucls)
      if (atoms.contains(a, u) &&
          !(atoms.contains(b, u) && atoms.contains(b, u.child())))
        return false;
    return true;
  };

  KripkeModel::PairList out;
  for (int a = 0; a < atoms.count(); ++a) {
    for (int b = 0; b < atoms.count(); ++b) {
      bool related = false;
      switch (frame) {
        case FrameClass::K:
        case FrameClass::D:
        case FrameClass::T:
          related = content_forward(a, b);
          break;
        case FrameClass::B:
          related = content_forward(a, b) && content_forward(b, a);
          break;
        case FrameClass::S4:
          related = capset_leq(a, b);
          break;
        case FrameClass::S5:
          related = capset_leq(a, b) && capset_leq(b, a);
          break;
      }
      if (related && ucl_transfer(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Standard models
// ---------------------------------------------------------------------------

int default_depth(const Formula& alpha) { return alpha.modal_depth() + 1; }

namespace {

std::string index_label(const Index& I) {
  std::string s;
  for (int i : I.elems()) {
    if (!s.empty()) s += '+';
    s += std::to_string(i);
  }
  return s;
}

std::string path_name(const Path& p) {
  std::string s = std::to_string(p.states[0]);
  for (std::size_t x = 0; x < p.length(); ++x)
    s += ":" + index_label(p.indices[x]) + ":" + std::to_string(p.states[x + 1]);
  return s;
}

void sort_unique(KripkeModel::PairList& r) {
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
}

}  // namespace

StandardModel build_standard_model(const AtomSet& atoms, int depth,
                                   std::size_t max_states) {
  if (depth < 0) throw std::invalid_argument("negative depth");
  const Signature& sig = atoms.signature();
  const FrameClass frame = sig.logic.frame;
  const std::vector<Index> subsets = nonempty_subsets(sig.iota);

  // Per-subset canonical successor lists.
  std::vector<std::vector<std::vector<int>>> succ(subsets.size());
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    succ[k].assign(atoms.count(), {});
    for (auto [a, b] : canonical_relation(atoms, subsets[k]))
      succ[k][a].push_back(b);
  }

  // Breadth-first path expansion; each state records its parent and the
  // index of its last edge for the relation sweeps below.
  std::vector<Path> paths;
  std::vector<int> parent;      // -1 for trivial paths
  std::vector<int> last_index;  // position in `subsets`; -1 for trivial
  auto push = [&](Path p, int par, int li) {
    if (max_states != 0 && paths.size() >= max_states)
      throw ModelError("standard model exceeds " +
                       std::to_string(max_states) + " states");
    paths.push_back(std::move(p));
    parent.push_back(par);
    last_index.push_back(li);
  };
  for (int a = 0; a < atoms.count(); ++a) push(Path::trivial(a), -1, -1);
  std::size_t level_begin = 0;
  for (int level = 0; level < depth; ++level) {
    std::size_t level_end = paths.size();
    for (std::size_t s = level_begin; s < level_end; ++s) {
      int tail = paths[s].tail();
      for (std::size_t k = 0; k < subsets.size(); ++k)
        for (int b : succ[k][tail])
          push(paths[s].extended(subsets[k], b), static_cast<int>(s),
               static_cast<int>(k));
    }
    level_begin = level_end;
  }

  const int n = static_cast<int>(paths.size());
  auto edge_has = [&](int s, int i) {
    return subsets[last_index[s]].contains(i);
  };

  std::map<int, KripkeModel::PairList> rel;
  for (int i : sig.iota.elems()) {
    KripkeModel::PairList r;
    switch (frame) {
      case FrameClass::K:
      case FrameClass::D:
        for (int s = 0; s < n; ++s)
          if (parent[s] >= 0 && edge_has(s, i)) r.emplace_back(parent[s], s);
        break;
      case FrameClass::T:
        for (int s = 0; s < n; ++s) {
          r.emplace_back(s, s);
          if (parent[s] >= 0 && edge_has(s, i)) r.emplace_back(parent[s], s);
        }
        break;
      case FrameClass::B:
        for (int s = 0; s < n; ++s) {
          r.emplace_back(s, s);
          if (parent[s] >= 0 && edge_has(s, i)) {
            r.emplace_back(parent[s], s);
            r.emplace_back(s, parent[s]);
          }
        }
        break;
      case FrameClass::S4:
        // s related to t iff s is an initial segment of t and the rest of
        // t is an i-path: walk ancestors while the edges carry i.
        for (int t = 0; t < n; ++t) {
          r.emplace_back(t, t);
          int u = t;
          while (parent[u] >= 0 && edge_has(u, i)) {
            u = parent[u];
            r.emplace_back(u, t);
          }
        }
        break;
      case FrameClass::S5: {
        // Equivalence classes: strip the maximal trailing i-path; two
        // states are related iff they share that anchor.
        std::vector<int> anchor(n);
        std::map<int, std::vector<int>> classes;
        for (int t = 0; t < n; ++t) {
          int u = t;
          while (parent[u] >= 0 && edge_has(u, i)) u = parent[u];
          anchor[t] = u;
          classes[u].push_back(t);
        }
        for (const auto& [a, members] : classes)
          for (int s : members)
            for (int t : members) r.emplace_back(s, t);
        break;
      }
    }
    sort_unique(r);
    rel.emplace(i, std::move(r));
  }

  std::vector<std::string> names;
  names.reserve(paths.size());
  for (const Path& p : paths) names.push_back(path_name(p));

  std::set<std::string> props;
  for (const Formula& f : atoms.closure_set().members())
    for (const std::string& p : f.propositions()) props.insert(p);
  std::map<std::string, std::set<int>> val;
  for (const std::string& p : props) {
    std::set<int>& states = val[p];
    Formula pf = Formula::prop(p);
    for (int s = 0; s < n; ++s)
      if (atoms.contains(paths[s].tail(), pf)) states.insert(s);
  }

  KripkeModel model(std::move(names), std::move(rel), std::move(val));
  return StandardModel{sig, atoms, depth, std::move(paths), std::move(model)};
}

// ---------------------------------------------------------------------------
// Audits
// ---------------------------------------------------------------------------

nlohmann::ordered_json AuditReport::to_json() const {
  nlohmann::ordered_json j;
  j["audit"] = audit;
  j["pass"] = pass();
  j["violations"] = violations;
  j["expected"] = expected;
  j["notes"] = notes;
  return j;
}

namespace {

std::string rel_label(const Index& I) { return "rel{" + I.to_string() + "}"; }

}  // namespace

AuditReport audit_canonicity(const AtomSet& atoms) {
  AuditReport report{"canonicity", {}, {}, {}};
  const Signature& sig = atoms.signature();
  const std::vector<Index> subsets = nonempty_subsets(sig.iota);
  const int n = atoms.count();

  std::vector<KripkeModel::PairList> rels;
  for (const Index& I : subsets) rels.push_back(canonical_relation(atoms, I));

  auto has = [&](const KripkeModel::PairList& r, int a, int b) {
    return std::binary_search(r.begin(), r.end(), std::make_pair(a, b));
  };

  for (std::size_t k = 0; k < subsets.size(); ++k) {
    const Index& I = subsets[k];
    const auto& r = rels[k];
    auto check_reflexive = [&] {
      for (int a = 0; a < n; ++a)
        if (!has(r, a, a))
          report.violations.push_back(rel_label(I) + " not reflexive at atom " +
                                      std::to_string(a));
    };
    auto check_symmetric = [&] {
      for (auto [a, b] : r)
        if (!has(r, b, a))
          report.violations.push_back(rel_label(I) + " not symmetric at (" +
                                      std::to_string(a) + "," +
                                      std::to_string(b) + ")");
    };
    auto check_transitive = [&] {
      if (!is_transitive(r))
        report.violations.push_back(rel_label(I) + " not transitive");
    };
    switch (sig.logic.frame) {
      case FrameClass::K:
        break;
      case FrameClass::D:
        // Seriality holds for singleton indices only; intersections of
        // serial relations need not be serial.
        if (I.is_singleton())
          for (int a = 0; a < n; ++a) {
            auto it = std::lower_bound(r.begin(), r.end(),
                                       std::make_pair(a, 0));
            if (it == r.end() || it->first != a)
              report.violations.push_back(rel_label(I) +
                                          " not serial at atom " +
                                          std::to_string(a));
          }
        break;
      case FrameClass::T:
        check_reflexive();
        break;
      case FrameClass::B:
        check_reflexive();
        check_symmetric();
        break;
      case FrameClass::S4:
        check_reflexive();
        check_transitive();
        break;
      case FrameClass::S5:
        check_reflexive();
        check_symmetric();
        check_transitive();
        break;
    }
  }

  // Monotonicity: the J-relation is included in the I-relation for I <= J.
  for (std::size_t a = 0; a < subsets.size(); ++a)
    for (std::size_t b = 0; b < subsets.size(); ++b) {
      if (a == b || !subsets[a].subset_of(subsets[b])) continue;
      for (auto pr : rels[b])
        if (!has(rels[a], pr.first, pr.second))
          report.violations.push_back(
              rel_label(subsets[b]) + " not included in " +
              rel_label(subsets[a]) + " at (" + std::to_string(pr.first) +
              "," + std::to_string(pr.second) + ")");
    }

  report.notes.push_back(std::to_string(n) + " atoms");
  return report;
}

AuditReport audit_standardness(const StandardModel& m) {
  AuditReport report{"standardness", {}, {}, {}};
  std::set<int> indices(m.sig.iota.elems().begin(), m.sig.iota.elems().end());
  auto violations =
      frame_violations(m.model, m.sig.logic.frame, indices);
  for (const FrameViolation& v : violations) {
    std::string desc = v.condition + " fails for index " +
                       std::to_string(v.index) + " at state " +
                       m.model.state_names()[v.state];
    if (v.other >= 0) desc += " / " + m.model.state_names()[v.other];
    // A maximal-length path has no extension, so seriality necessarily
    // breaks at the frontier; that is a truncation artifact, not a defect.
    if (v.condition == "serial" && !m.is_interior(v.state))
      report.expected.push_back(desc + " (frontier)");
    else
      report.violations.push_back(desc);
  }
  return report;
}

AuditReport audit_truth(const StandardModel& m) {
  AuditReport report{"truth", {}, {}, {}};
  // Truncation at depth d only guarantees the lemma for pairs whose modal
  // recursion stays inside the model: length(s) + md(phi) <= d.  Beyond
  // that, dead-end frontier states make boxes vacuously true in the K/D
  // geometries regardless of their tails.
  Evaluator ev(m.model);
  std::size_t checked = 0;
  for (const Formula& f : m.atoms.closure_set().sorted()) {
    const int md = f.modal_depth();
    const std::vector<bool>& truth = ev.truth(f);
    for (int s = 0; s < m.model.num_states(); ++s) {
      if (static_cast<int>(m.paths[s].length()) + md > m.depth) continue;
      ++checked;
      bool in_tail = m.atoms.contains(m.paths[s].tail(), f);
      if (truth[s] != in_tail)
        report.violations.push_back(
            render(f) + " at " + m.model.state_names()[s] + ": " +
            (in_tail ? "in tail but false" : "true but not in tail"));
    }
  }
  if (checked == 0) report.notes.push_back("no checkable pairs");
  report.notes.push_back(std::to_string(checked) + " state/formula pairs");
  return report;
}

AuditReport audit_existence(const StandardModel& m) {
  AuditReport report{"existence", {}, {}, {}};
  std::vector<int> interior;
  for (int s = 0; s < m.model.num_states(); ++s)
    if (m.is_interior(s)) interior.push_back(s);
  if (interior.empty()) {
    report.notes.push_back("no interior states");
    return report;
  }

  auto successors_of = [&](const KripkeModel::PairList& r) {
    std::vector<std::vector<int>> succ(m.model.num_states());
    for (auto [a, b] : r) succ[a].push_back(b);
    return succ;
  };

  for (const Formula& f : m.atoms.closure_set().positives()) {
    if (!f.is(Kind::Cap) && !f.is(Kind::Ucl)) continue;
    auto succ = successors_of(f.is(Kind::Cap)
                                  ? compose_cap(m.model, f.index())
                                  : compose_ucl(m.model, f.index()));
    for (int s : interior) {
      if (m.atoms.contains(m.paths[s].tail(), f)) continue;
      bool witnessed = false;
      for (int t : succ[s])
        if (!m.atoms.contains(m.paths[t].tail(), f.child())) {
          witnessed = true;
          break;
        }
      if (!witnessed)
        report.violations.push_back("no refuting successor for absent " +
                                    render(f) + " at " +
                                    m.model.state_names()[s]);
    }
  }
  report.notes.push_back(std::to_string(interior.size()) +
                         " interior states");
  return report;
}

}  // namespace modal
