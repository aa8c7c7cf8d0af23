// Acceptance gate: one line of output per criterion, nonzero exit when any
// criterion fails.  Everything here goes through the public library API.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "modal/solver.hpp"

using namespace modal;

namespace {

int g_failures = 0;

void report(int number, const std::string& label, bool pass,
            const std::string& detail = "") {
  std::cout << "criterion " << number << " (" << label << "): "
            << (pass ? "pass" : "FAIL");
  if (!detail.empty()) std::cout << " [" << detail << "]";
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

const SystemId kLogics[] = {
    {FrameClass::K, LangLevel::CapUcl},  {FrameClass::D, LangLevel::CapUcl},
    {FrameClass::T, LangLevel::CapUcl},  {FrameClass::B, LangLevel::CapUcl},
    {FrameClass::S4, LangLevel::CapUcl}, {FrameClass::S5, LangLevel::CapUcl}};

// ---------------------------------------------------------------------------
// Random generators for the soundness sweep
// ---------------------------------------------------------------------------

using Rng = std::mt19937;

Formula random_formula(Rng& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 0 : 5);
  std::uniform_int_distribution<int> elem(1, 3);
  auto rand_index = [&] {
    std::vector<int> v;
    int n = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int k = 0; k < n; ++k) v.push_back(elem(rng));
    return Index(v);
  };
  switch (pick(rng)) {
    case 0:
      return Formula::prop(std::uniform_int_distribution<int>(0, 1)(rng) ? "p"
                                                                         : "q");
    case 1:
      return Formula::neg(random_formula(rng, depth - 1));
    case 2:
      return Formula::impl(random_formula(rng, depth - 1),
                           random_formula(rng, depth - 1));
    case 3:
      return Formula::box(elem(rng), random_formula(rng, depth - 1));
    case 4:
      return Formula::cap(rand_index(), random_formula(rng, depth - 1));
    default:
      return Formula::ucl(rand_index(), random_formula(rng, depth - 1));
  }
}

Substitution random_substitution(Rng& rng) {
  Substitution sub;
  sub.formulas.emplace('a', random_formula(rng, 2));
  sub.formulas.emplace('b', random_formula(rng, 2));
  // J random nonempty subset of {1,2,3}, I nonempty subset of J, i in I.
  std::vector<int> j_elems;
  while (j_elems.empty())
    for (int e = 1; e <= 3; ++e)
      if (std::uniform_int_distribution<int>(0, 1)(rng)) j_elems.push_back(e);
  std::vector<int> i_elems;
  while (i_elems.empty())
    for (int e : j_elems)
      if (std::uniform_int_distribution<int>(0, 1)(rng)) i_elems.push_back(e);
  sub.indices.emplace('I', Index(i_elems));
  sub.indices.emplace('J', Index(j_elems));
  sub.elements.emplace(
      'i', i_elems[std::uniform_int_distribution<int>(
               0, static_cast<int>(i_elems.size()) - 1)(rng)]);
  return sub;
}

KripkeModel random_model(Rng& rng, FrameClass c) {
  int n = std::uniform_int_distribution<int>(1, 5)(rng);
  std::vector<std::string> names;
  for (int s = 0; s < n; ++s) names.push_back("w" + std::to_string(s));

  std::map<int, KripkeModel::PairList> rel;
  for (int i = 1; i <= 3; ++i) {
    std::set<std::pair<int, int>> edges;
    if (c == FrameClass::S5) {
      // Random partition; blocks become full cliques.
      std::vector<int> block(n);
      for (int s = 0; s < n; ++s)
        block[s] = std::uniform_int_distribution<int>(0, n - 1)(rng);
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          if (block[s] == block[t]) edges.insert({s, t});
    } else {
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          if (std::uniform_int_distribution<int>(0, 3)(rng) == 0)
            edges.insert({s, t});
      switch (c) {
        case FrameClass::K:
          break;
        case FrameClass::D:
          for (int s = 0; s < n; ++s) {
            bool has = false;
            for (int t = 0; t < n && !has; ++t) has = edges.count({s, t});
            if (!has)
              edges.insert(
                  {s, std::uniform_int_distribution<int>(0, n - 1)(rng)});
          }
          break;
        case FrameClass::T:
          for (int s = 0; s < n; ++s) edges.insert({s, s});
          break;
        case FrameClass::B: {
          std::set<std::pair<int, int>> sym = edges;
          for (auto [s, t] : edges) sym.insert({t, s});
          edges = sym;
          for (int s = 0; s < n; ++s) edges.insert({s, s});
          break;
        }
        case FrameClass::S4: {
          for (int s = 0; s < n; ++s) edges.insert({s, s});
          bool changed = true;
          while (changed) {
            changed = false;
            for (auto [s, t] : std::set<std::pair<int, int>>(edges))
              for (auto [u, v] : std::set<std::pair<int, int>>(edges))
                if (t == u && edges.insert({s, v}).second) changed = true;
          }
          break;
        }
        case FrameClass::S5:
          break;
      }
    }
    rel[i] = KripkeModel::PairList(edges.begin(), edges.end());
  }

  std::map<std::string, std::set<int>> val;
  for (const char* prop : {"p", "q"}) {
    std::set<int> where;
    for (int s = 0; s < n; ++s)
      if (std::uniform_int_distribution<int>(0, 1)(rng)) where.insert(s);
    val[prop] = where;
  }
  return KripkeModel(names, rel, val);
}

// ---------------------------------------------------------------------------
// The pinned signature corpus
// ---------------------------------------------------------------------------

struct CorpusEntry {
  const char* logic;
  const char* alpha;
  std::vector<int> iota;
};

const std::vector<CorpusEntry> kCorpus = {
    {"CK", "[+1 2]p", {1, 2}},
    {"CK", "[1]p & [+1 2]~p", {1, 2}},
    {"CD", "[+1 2]p", {1, 2}},
    {"CD", "[&1 2](p -> [1]p)", {1, 2}},
    {"CT", "[&1 2]p -> [+1 2]p", {1, 2}},
    {"CT", "[&1 2](p -> [1]p)", {1, 2}},
    {"CT", "[+1]p", {1}},
    {"CB", "[1]p & [+1 2]~p", {1, 2}},
    {"CB", "[&1 2][&1]p", {1, 2}},
    {"CS4", "[&1 2]p -> [+1 2]p", {1, 2}},
    {"CS4", "[&1 2]p & ~[1]p", {1, 2}},
    {"CS5", "[+1 2]p", {1, 2}},
    {"CS5", "~[&1 2]p & [1]p", {1, 2}},
};

struct CorpusRun {
  Signature sig;
  AuditReport canonicity, standardness, truth, existence;
  bool frontier_free;  // no expected artifacts either
  std::string key;
};

std::vector<CorpusRun> run_corpus() {
  std::vector<CorpusRun> out;
  for (const CorpusEntry& e : kCorpus) {
    Signature sig = Signature::make(*logic_from_string(e.logic),
                                    parse(e.alpha), Index(e.iota));
    AtomSet atoms(closure(sig));
    StandardModel m = build_standard_model(atoms, default_depth(sig.alpha));
    CorpusRun run{sig,
                  audit_canonicity(atoms),
                  audit_standardness(m),
                  audit_truth(m),
                  audit_existence(m),
                  false,
                  std::string(e.logic) + " " + e.alpha};
    run.frontier_free = run.standardness.expected.empty();
    out.push_back(std::move(run));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Proof corpus for criterion 9
// ---------------------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool proves(SystemId sys, const ProofScript& script, const Formula& goal) {
  CheckResult r = check_proof(sys, script);
  return r.ok && script.conclusion() == goal;
}

}  // namespace

int main() {
  std::cout.setf(std::ios::unitbuf);

  // 1. Soundness sweep: every schema of every full-language system, random
  // instances, random models of the matching class.
  {
    Rng rng(1);
    int checked = 0, failed = 0;
    std::string first_bad;
    for (SystemId sys : kLogics) {
      std::vector<KripkeModel> models;
      for (int k = 0; k < 200; ++k)
        models.push_back(random_model(rng, sys.frame));
      for (const KripkeModel& m : models)
        if (!frame_check(m, sys.frame, {1, 2, 3})) ++failed;
      for (SchemaName schema : assemble_system(sys).axioms) {
        for (int k = 0; k < 50; ++k) {
          Formula inst = instantiate_axiom(schema, random_substitution(rng));
          for (const KripkeModel& m : models) {
            ++checked;
            if (!valid_on_model(m, inst)) {
              ++failed;
              if (first_bad.empty())
                first_bad = to_string(sys) + "/" + to_string(schema) + ": " +
                            render(inst);
            }
          }
        }
      }
    }
    report(1, "axiom soundness sweep", failed == 0,
           std::to_string(checked) + " checks" +
               (first_bad.empty() ? "" : "; first: " + first_bad));
  }

  // 2. The D schema fails for intersection: a two-state serial countermodel
  // exists and the decision procedure reports invalidity with a verified
  // witness.
  {
    Formula dcap = parse("[&1 2]p -> ~[&1 2]~p");
    Verdict v = brute_force_sat(Formula::neg(dcap), FrameClass::D,
                                {.max_states = 2});
    bool ok = v.sat() && v.model.has_value() &&
              v.model->num_states() <= 2 &&
              frame_check(*v.model, FrameClass::D, {1, 2}) &&
              satisfies(*v.model, v.state, Formula::neg(dcap));
    ValidityResult r =
        decide_valid(dcap, *logic_from_string("CD"), default_depth(dcap));
    ok = ok && r.verdict == Validity::Invalid && r.witness.has_value() &&
         frame_check(*r.witness, FrameClass::D, {1, 2}) &&
         satisfies(*r.witness, r.state, Formula::neg(dcap));
    report(2, "cap ignores seriality", ok);
  }

  // 3-6. The audit corpus.
  std::vector<CorpusRun> corpus = run_corpus();
  {
    bool ok = true;
    std::string bad;
    for (const CorpusRun& r : corpus)
      if (!r.canonicity.pass() && (bad = r.key, ok = false, true)) break;
    report(3, "canonical relation properties", ok, bad);
  }
  {
    bool ok = true;
    std::string bad;
    for (const CorpusRun& r : corpus) {
      bool this_ok = r.standardness.pass();
      // Reflexive frames have no frontier artifacts at all.
      if (r.sig.logic.frame == FrameClass::S4 ||
          r.sig.logic.frame == FrameClass::S5)
        this_ok = this_ok && r.frontier_free;
      if (!this_ok) {
        ok = false;
        bad = r.key;
        break;
      }
    }
    report(4, "standardness of built models", ok, bad);
  }
  {
    bool ok = true;
    std::string bad;
    int ucl_sigs = 0;
    for (const CorpusRun& r : corpus) {
      for (const Formula& f : subformulas(r.sig.alpha))
        if (f.is(Kind::Ucl)) {
          ++ucl_sigs;
          break;
        }
      if (!r.truth.pass() && bad.empty()) {
        ok = false;
        bad = r.key;
      }
    }
    ok = ok && ucl_sigs >= 3;
    report(5, "truth lemma audit", ok,
           bad.empty() ? std::to_string(ucl_sigs) + " ucl signatures" : bad);
  }
  {
    bool ok = true;
    std::string bad;
    for (const CorpusRun& r : corpus)
      if (!r.existence.pass() && (bad = r.key, ok = false, true)) break;
    report(6, "existence lemma audit", ok, bad);
  }

  // 7. Engine agreement over an exhaustive small-formula corpus.
  {
    auto formulas = enumerate_formulas(4, 2, Index({1, 2}), "p");
    bool ok = true;
    std::string detail;
    int definite = 0;
    for (const char* name : {"CK", "CT", "CB"}) {
      AgreementReport rep =
          oracle_compare(*logic_from_string(name), formulas,
                         {.max_states = 4, .budget = 20000});
      definite += rep.both_definite;
      if (!rep.pass()) {
        ok = false;
        detail = std::string(name) + ": " + rep.disagreements.front();
        break;
      }
    }
    if (ok)
      detail = std::to_string(formulas.size()) + " formulas, " +
               std::to_string(definite) + " definite pairs";
    report(7, "oracle cross-check", ok, detail);
  }

  // 8. Transitive closure of union against an independent matrix-power
  // oracle on random relation families.
  {
    Rng rng(8);
    bool ok = true;
    for (int trial = 0; trial < 100 && ok; ++trial) {
      int n = std::uniform_int_distribution<int>(1, 8)(rng);
      std::vector<std::string> names;
      for (int s = 0; s < n; ++s) names.push_back("w" + std::to_string(s));
      std::map<int, KripkeModel::PairList> rel;
      for (int i = 1; i <= 3; ++i) {
        KripkeModel::PairList r;
        for (int s = 0; s < n; ++s)
          for (int t = 0; t < n; ++t)
            if (std::uniform_int_distribution<int>(0, 4)(rng) == 0)
              r.push_back({s, t});
        rel[i] = r;
      }
      KripkeModel m(names, rel, {});
      for (const Index& I :
           {Index({1}), Index({2, 3}), Index({1, 2, 3})}) {
        std::vector<std::vector<bool>> u(n, std::vector<bool>(n, false));
        for (int i : I.elems())
          for (auto [s, t] : m.rel(i)) u[s][t] = true;
        auto acc = u, pw = u;
        for (int step = 1; step < n; ++step) {
          std::vector<std::vector<bool>> nx(n, std::vector<bool>(n, false));
          for (int s = 0; s < n; ++s)
            for (int k = 0; k < n; ++k)
              if (pw[s][k])
                for (int t = 0; t < n; ++t)
                  if (u[k][t]) nx[s][t] = true;
          pw = nx;
          for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t)
              if (pw[s][t]) acc[s][t] = true;
        }
        KripkeModel::PairList expect;
        for (int s = 0; s < n; ++s)
          for (int t = 0; t < n; ++t)
            if (acc[s][t]) expect.push_back({s, t});
        if (compose_ucl(m, I) != expect) ok = false;
      }
    }
    report(8, "closure-of-union oracle", ok);
  }

  // 9. The proof corpus: three accepted derivations, and every single-line
  // deletion or formula mutation is rejected; the bogus DCAP script fails.
  {
    struct ProofCase {
      const char* file;
      const char* system;
      const char* goal;
    };
    const ProofCase cases[] = {
        {"tucl_ct.txt", "AX_CT", "[+1 2]p -> p"},
        {"ducl_cd.txt", "AX_CD", "[+1 2]p -> ~[+1 2]~p"},
        {"ucl2_cs5.txt", "AX_CS5", "[+1]p -> [+1](p & [+1]p)"},
    };
    bool ok = true;
    std::string detail;
    for (const ProofCase& pc : cases) {
      SystemId sys = *system_from_string(pc.system);
      Formula goal = parse(pc.goal);
      ProofScript script =
          parse_script(slurp(std::string(DATA_DIR) + "/" + pc.file));
      if (!proves(sys, script, goal)) {
        ok = false;
        detail = std::string(pc.file) + " rejected outright";
        break;
      }
      for (std::size_t drop = 0; drop < script.lines.size() && ok; ++drop) {
        ProofScript cut;
        for (std::size_t k = 0; k < script.lines.size(); ++k)
          if (k != drop) cut.lines.push_back(script.lines[k]);
        if (proves(sys, cut, goal)) {
          ok = false;
          detail = std::string(pc.file) + ": survives deleting line " +
                   std::to_string(script.lines[drop].number);
        }
      }
      for (std::size_t at = 0; at < script.lines.size() && ok; ++at) {
        ProofScript bent = script;
        bent.lines[at].formula =
            Formula::impl(bent.lines[at].formula, Formula::prop("zz_mut"));
        if (proves(sys, bent, goal)) {
          ok = false;
          detail = std::string(pc.file) + ": survives mutating line " +
                   std::to_string(script.lines[at].number);
        }
      }
    }
    CheckResult bad = check_proof(
        *system_from_string("AX_CD"),
        parse_script(slurp(std::string(DATA_DIR) + "/dcap.txt")));
    if (bad.ok) {
      ok = false;
      detail = "dcap.txt accepted";
    }
    report(9, "proof corpus and mutations", ok, detail);
  }

  // 10. Determinism: rebuilding the corpus from scratch reproduces the model
  // and every audit byte for byte.
  {
    bool ok = true;
    std::string bad;
    for (const CorpusEntry& e : kCorpus) {
      Signature sig = Signature::make(*logic_from_string(e.logic),
                                      parse(e.alpha), Index(e.iota));
      auto snapshot = [&] {
        AtomSet atoms(closure(sig));
        StandardModel m = build_standard_model(atoms, default_depth(sig.alpha));
        std::string s = m.model.to_json().dump();
        s += audit_canonicity(atoms).to_json().dump();
        s += audit_standardness(m).to_json().dump();
        s += audit_truth(m).to_json().dump();
        s += audit_existence(m).to_json().dump();
        return s;
      };
      if (snapshot() != snapshot()) {
        ok = false;
        bad = std::string(e.logic) + " " + e.alpha;
        break;
      }
    }
    report(10, "deterministic rebuilds", ok, bad);
  }

  return g_failures == 0 ? 0 : 1;
}
