#include "modal/solver.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>

namespace modal {

namespace {

// Relations over n <= 5 states as per-source adjacency bitmasks.
using Rel = std::vector<std::uint32_t>;

Rel transitive_close_rows(Rel r) {
  const std::size_t n = r.size();
  for (std::size_t pass = 0; pass < n; ++pass)
    for (std::size_t s = 0; s < n; ++s) {
      std::uint32_t m = r[s];
      for (std::size_t t = 0; t < n; ++t)
        if (m & (1u << t)) m |= r[t];
      r[s] = m;
    }
  return r;
}

/// Lazily decodable family of candidate relations for one frame class.
struct RelSpace {
  std::uint64_t count = 0;
  std::function<Rel(std::uint64_t)> decode;
};

RelSpace relation_space(FrameClass c, int n) {
  const std::uint32_t full = (1u << n) - 1;
  switch (c) {
    case FrameClass::K: {
      RelSpace sp;
      sp.count = std::uint64_t{1} << (n * n);
      sp.decode = [n](std::uint64_t k) {
        Rel r(n);
        for (int s = 0; s < n; ++s)
          r[s] = static_cast<std::uint32_t>((k >> (s * n)) & ((1u << n) - 1));
        return r;
      };
      return sp;
    }
    case FrameClass::D: {
      RelSpace sp;
      std::uint64_t per_row = full;  // nonempty successor sets
      sp.count = 1;
      for (int s = 0; s < n; ++s) sp.count *= per_row;
      sp.decode = [n, per_row](std::uint64_t k) {
        Rel r(n);
        for (int s = 0; s < n; ++s) {
          r[s] = static_cast<std::uint32_t>(k % per_row) + 1;
          k /= per_row;
        }
        return r;
      };
      return sp;
    }
    case FrameClass::T: {
      RelSpace sp;
      sp.count = std::uint64_t{1} << (n * n - n);
      sp.decode = [n](std::uint64_t k) {
        Rel r(n);
        int bit = 0;
        for (int s = 0; s < n; ++s) {
          r[s] = 1u << s;
          for (int t = 0; t < n; ++t) {
            if (t == s) continue;
            if ((k >> bit++) & 1) r[s] |= 1u << t;
          }
        }
        return r;
      };
      return sp;
    }
    case FrameClass::B: {
      RelSpace sp;
      sp.count = std::uint64_t{1} << (n * (n - 1) / 2);
      sp.decode = [n](std::uint64_t k) {
        Rel r(n);
        for (int s = 0; s < n; ++s) r[s] = 1u << s;
        int bit = 0;
        for (int s = 0; s < n; ++s)
          for (int t = s + 1; t < n; ++t)
            if ((k >> bit++) & 1) {
              r[s] |= 1u << t;
              r[t] |= 1u << s;
            }
        return r;
      };
      return sp;
    }
    case FrameClass::S4: {
      // Preorders: reflexive-transitive closures of the T space, deduped.
      static std::map<int, std::vector<Rel>> cache;
      auto it = cache.find(n);
      if (it == cache.end()) {
        RelSpace t = relation_space(FrameClass::T, n);
        std::set<Rel> seen;
        for (std::uint64_t k = 0; k < t.count; ++k)
          seen.insert(transitive_close_rows(t.decode(k)));
        it = cache.emplace(n, std::vector<Rel>(seen.begin(), seen.end()))
                 .first;
      }
      RelSpace sp;
      sp.count = it->second.size();
      const std::vector<Rel>* list = &it->second;
      sp.decode = [list](std::uint64_t k) { return (*list)[k]; };
      return sp;
    }
    case FrameClass::S5: {
      // Partitions via restricted growth strings.
      static std::map<int, std::vector<Rel>> cache;
      auto it = cache.find(n);
      if (it == cache.end()) {
        std::vector<Rel> rels;
        std::vector<int> block(n, 0);
        std::function<void(int, int)> rec = [&](int pos, int max_used) {
          if (pos == n) {
            Rel r(n);
            for (int s = 0; s < n; ++s)
              for (int t = 0; t < n; ++t)
                if (block[s] == block[t]) r[s] |= 1u << t;
            rels.push_back(std::move(r));
            return;
          }
          for (int b = 0; b <= max_used + 1; ++b) {
            block[pos] = b;
            rec(pos + 1, std::max(max_used, b));
          }
        };
        block[0] = 0;
        rec(1, 0);
        if (n == 1) rels.push_back(Rel{1u});
        it = cache.emplace(n, std::move(rels)).first;
      }
      RelSpace sp;
      sp.count = it->second.size();
      const std::vector<Rel>* list = &it->second;
      sp.decode = [list](std::uint64_t k) { return (*list)[k]; };
      return sp;
    }
  }
  throw std::logic_error("unreachable");
}

// Compiled formula program for the fast bitmask evaluator.
struct Instr {
  Kind kind;
  int a = -1, b = -1;   // operand slots
  int prop = -1;        // Prop
  int box = -1;         // Box subscript
  std::vector<int> idx;  // Cap/Ucl index elements
};

int compile_formula(const Formula& f, std::vector<Instr>& prog,
                    std::map<std::string, int>& props) {
  Instr in;
  in.kind = f.kind();
  switch (f.kind()) {
    case Kind::Prop:
      in.prop = props.emplace(f.prop_name(), static_cast<int>(props.size()))
                    .first->second;
      break;
    case Kind::Neg:
      in.a = compile_formula(f.child(), prog, props);
      break;
    case Kind::Impl:
      in.a = compile_formula(f.lhs(), prog, props);
      in.b = compile_formula(f.rhs(), prog, props);
      break;
    case Kind::Box:
      in.box = f.box_index();
      in.a = compile_formula(f.child(), prog, props);
      break;
    case Kind::Cap:
    case Kind::Ucl:
      in.idx = f.index().elems();
      in.a = compile_formula(f.child(), prog, props);
      break;
  }
  prog.push_back(std::move(in));
  return static_cast<int>(prog.size()) - 1;
}

/// Truth bitmask of every subprogram slot; rels maps index element ->
/// position in the per-candidate relation array.
std::uint32_t eval_program(const std::vector<Instr>& prog,
                           const std::map<int, int>& rel_slot,
                           const std::vector<Rel>& rels,
                           const std::vector<std::uint32_t>& prop_masks,
                           int n) {
  const std::uint32_t full = (1u << n) - 1;
  std::vector<std::uint32_t> value(prog.size());
  for (std::size_t k = 0; k < prog.size(); ++k) {
    const Instr& in = prog[k];
    switch (in.kind) {
      case Kind::Prop:
        value[k] = prop_masks[in.prop];
        break;
      case Kind::Neg:
        value[k] = ~value[in.a] & full;
        break;
      case Kind::Impl:
        value[k] = (~value[in.a] | value[in.b]) & full;
        break;
      case Kind::Box: {
        const Rel& r = rels[rel_slot.at(in.box)];
        std::uint32_t m = 0;
        for (int s = 0; s < n; ++s)
          if ((r[s] & ~value[in.a]) == 0) m |= 1u << s;
        value[k] = m;
        break;
      }
      case Kind::Cap: {
        std::uint32_t m = 0;
        for (int s = 0; s < n; ++s) {
          std::uint32_t row = full;
          for (int i : in.idx) row &= rels[rel_slot.at(i)][s];
          if ((row & ~value[in.a]) == 0) m |= 1u << s;
        }
        value[k] = m;
        break;
      }
      case Kind::Ucl: {
        Rel u(n, 0);
        for (int s = 0; s < n; ++s)
          for (int i : in.idx) u[s] |= rels[rel_slot.at(i)][s];
        u = transitive_close_rows(std::move(u));
        std::uint32_t m = 0;
        for (int s = 0; s < n; ++s)
          if ((u[s] & ~value[in.a]) == 0) m |= 1u << s;
        value[k] = m;
        break;
      }
    }
  }
  return value.back();
}

KripkeModel materialize(const std::vector<int>& elements,
                        const std::vector<Rel>& rels,
                        const std::vector<std::string>& props,
                        const std::vector<std::uint32_t>& prop_masks, int n) {
  std::vector<std::string> names;
  for (int s = 0; s < n; ++s) names.push_back("w" + std::to_string(s));
  std::map<int, KripkeModel::PairList> rel;
  for (std::size_t k = 0; k < elements.size(); ++k) {
    KripkeModel::PairList pairs;
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        if (rels[k][s] & (1u << t)) pairs.emplace_back(s, t);
    rel.emplace(elements[k], std::move(pairs));
  }
  std::map<std::string, std::set<int>> val;
  for (std::size_t p = 0; p < props.size(); ++p) {
    std::set<int>& states = val[props[p]];
    for (int s = 0; s < n; ++s)
      if (prop_masks[p] & (1u << s)) states.insert(s);
  }
  return KripkeModel(std::move(names), std::move(rel), std::move(val));
}

}  // namespace

Verdict brute_force_sat(const Formula& f, FrameClass c, BruteLimits lim) {
  if (lim.max_states < 1 || lim.max_states > 5)
    return {Verdict::Kind::Unknown, std::nullopt, -1,
            "max_states must be between 1 and 5"};

  std::vector<Instr> prog;
  std::map<std::string, int> prop_ids;
  compile_formula(f, prog, prop_ids);
  std::vector<std::string> props(prop_ids.size());
  for (const auto& [name, id] : prop_ids) props[id] = name;

  std::set<int> elem_set = f.index_elements();
  std::vector<int> elements(elem_set.begin(), elem_set.end());
  std::map<int, int> rel_slot;
  for (std::size_t k = 0; k < elements.size(); ++k)
    rel_slot.emplace(elements[k], static_cast<int>(k));

  std::uint64_t budget = lim.budget;
  for (int n = 1; n <= lim.max_states; ++n) {
    RelSpace space = relation_space(c, n);
    const std::uint64_t vals_per_prop = std::uint64_t{1} << n;

    // Odometer over one relation ordinal per index element and one
    // valuation mask per proposition.
    std::vector<std::uint64_t> rel_ord(elements.size(), 0);
    std::vector<std::uint32_t> prop_masks(props.size(), 0);
    std::vector<Rel> rels;
    for (std::size_t k = 0; k < elements.size(); ++k)
      rels.push_back(space.decode(0));

    while (true) {
      if (budget == 0)
        return {Verdict::Kind::Unknown, std::nullopt, -1,
                "budget exhausted at " + std::to_string(n) + " states"};
      --budget;

      std::uint32_t sat = eval_program(prog, rel_slot, rels, prop_masks, n);
      if (sat != 0) {
        int s = 0;
        while (!((sat >> s) & 1)) ++s;
        KripkeModel m = materialize(elements, rels, props, prop_masks, n);
        std::set<int> idx(elements.begin(), elements.end());
        if (satisfies(m, s, f) && frame_check(m, c, idx))
          return {Verdict::Kind::Sat, std::move(m), s, ""};
        // Fast path and reference semantics disagree: treat as a miss and
        // keep searching rather than emit an unverified witness.
      }

      // Advance the odometer.
      std::size_t d = 0;
      for (; d < props.size(); ++d) {
        if (++prop_masks[d] < vals_per_prop) break;
        prop_masks[d] = 0;
      }
      if (d < props.size()) continue;
      std::size_t r = 0;
      for (; r < elements.size(); ++r) {
        if (++rel_ord[r] < space.count) {
          rels[r] = space.decode(rel_ord[r]);
          break;
        }
        rel_ord[r] = 0;
        rels[r] = space.decode(0);
      }
      if (r == elements.size()) break;
    }
  }
  return {Verdict::Kind::Unsat, std::nullopt, -1,
          "exhausted-models(" + std::to_string(lim.max_states) + ")"};
}

Verdict closure_sat(const Formula& f, SystemId logic, int depth,
                    ClosureLimits lim) {
  std::set<int> elems = f.index_elements();
  std::vector<int> iota_elems(elems.begin(), elems.end());
  if (iota_elems.empty()) iota_elems.push_back(1);
  Signature sig = Signature::make(logic, f, Index(iota_elems));

  ClosureSet cl = closure(sig);
  if (cl.positives().size() > 22)
    return {Verdict::Kind::Unknown, std::nullopt, -1,
            "closure too large (" + std::to_string(cl.positives().size()) +
                " positives)"};
  AtomSet atoms(std::move(cl));

  bool any = false;
  for (int a = 0; a < atoms.count() && !any; ++a)
    any = atoms.contains(a, f);
  if (!any) return {Verdict::Kind::Unsat, std::nullopt, -1, "no-atom-contains"};

  if (atoms.count() > lim.max_atoms)
    return {Verdict::Kind::Unknown, std::nullopt, -1,
            "too many atoms (" + std::to_string(atoms.count()) + ")"};

  std::optional<StandardModel> smo;
  try {
    smo = build_standard_model(atoms, depth, lim.max_model_states);
  } catch (const ModelError&) {
    return {Verdict::Kind::Unknown, std::nullopt, -1,
            "standard model exceeds the state limit"};
  }
  const StandardModel& sm = *smo;

  std::set<int> idx(sig.iota.elems().begin(), sig.iota.elems().end());
  Evaluator ev(sm.model);
  const std::vector<bool>& truth = ev.truth(f);
  for (int s = 0; s < sm.model.num_states(); ++s) {
    if (!atoms.contains(sm.paths[s].tail(), f) || !truth[s]) continue;
    if (!frame_check(sm.model, logic.frame, idx))
      return {Verdict::Kind::Unknown, std::nullopt, -1,
              "witness model violates the frame conditions (depth "
              "truncation)"};
    return {Verdict::Kind::Sat, sm.model, s, ""};
  }
  return {Verdict::Kind::Unknown, std::nullopt, -1,
          "atoms admit the formula but no state verifies it"};
}

Verdict closure_sat(const Formula& f, SystemId logic, ClosureLimits lim) {
  return closure_sat(f, logic, default_depth(f), lim);
}

ValidityResult decide_valid(const Formula& f, SystemId logic, int depth,
                            BruteLimits oracle, ClosureLimits lim) {
  Formula neg = Formula::neg(f);
  Verdict brute = brute_force_sat(neg, frame_of(logic), oracle);
  if (brute.sat())
    return {Validity::Invalid, std::move(brute.model), brute.state,
            "oracle countermodel"};
  Verdict cs = closure_sat(neg, logic, depth, lim);
  if (cs.sat())
    return {Validity::Invalid, std::move(cs.model), cs.state,
            "standard-model countermodel"};
  if (brute.unsat() && cs.unsat())
    return {Validity::Valid, std::nullopt, -1,
            "oracle " + brute.detail + "; closure " + cs.detail};
  return {Validity::Unknown, std::nullopt, -1,
          "oracle: " +
              (brute.definite() ? std::string("unsat ") + brute.detail
                                : brute.detail) +
              "; closure: " +
              (cs.definite() ? std::string("unsat ") + cs.detail : cs.detail)};
}

std::vector<Formula> enumerate_formulas(int max_connectives, int max_depth,
                                        const Index& elements,
                                        const std::string& prop) {
  std::vector<Index> subsets = nonempty_subsets(elements);
  std::vector<std::vector<Formula>> by_size(max_connectives + 1);
  by_size[0].push_back(Formula::prop(prop));
  for (int size = 1; size <= max_connectives; ++size) {
    for (const Formula& g : by_size[size - 1]) {
      by_size[size].push_back(Formula::neg(g));
      for (int i : elements.elems()) by_size[size].push_back(Formula::box(i, g));
      for (const Index& I : subsets) {
        by_size[size].push_back(Formula::cap(I, g));
        by_size[size].push_back(Formula::ucl(I, g));
      }
    }
    for (int left = 0; left <= size - 1; ++left)
      for (const Formula& a : by_size[left])
        for (const Formula& b : by_size[size - 1 - left])
          by_size[size].push_back(Formula::impl(a, b));
  }
  std::vector<Formula> out;
  for (const auto& bucket : by_size)
    for (const Formula& g : bucket)
      if (g.modal_depth() <= max_depth) out.push_back(g);
  return out;
}

AgreementReport oracle_compare(SystemId logic,
                               const std::vector<Formula>& formulas,
                               BruteLimits brute, ClosureLimits lim) {
  AgreementReport report;
  for (const Formula& f : formulas) {
    ++report.formulas;
    Verdict b = brute_force_sat(f, frame_of(logic), brute);
    Verdict c = closure_sat(f, logic, lim);
    if (!b.definite() || !c.definite()) continue;
    ++report.both_definite;
    if (b.sat() != c.sat())
      report.disagreements.push_back(render(f) + ": oracle " +
                                     (b.sat() ? "sat" : "unsat") +
                                     ", closure " + (c.sat() ? "sat" : "unsat"));
  }
  return report;
}

}  // namespace modal
