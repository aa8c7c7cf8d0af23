#include "modal/proof.hpp"

#include <algorithm>
#include <sstream>

namespace modal {

std::string to_string(SystemId id) {
  std::string prefix;
  switch (id.level) {
    case LangLevel::Base:
      prefix = "AX_";
      break;
    case LangLevel::Cap:
      prefix = "AX_I";
      break;
    case LangLevel::CapUcl:
      prefix = "AX_C";
      break;
  }
  return prefix + to_string(id.frame);
}

std::optional<SystemId> system_from_string(const std::string& s) {
  if (s.rfind("AX_", 0) != 0) return std::nullopt;
  std::string rest = s.substr(3);
  LangLevel level = LangLevel::Base;
  if (!rest.empty() && rest[0] == 'I') {
    level = LangLevel::Cap;
    rest = rest.substr(1);
  } else if (!rest.empty() && rest[0] == 'C') {
    level = LangLevel::CapUcl;
    rest = rest.substr(1);
  }
  auto frame = frame_class_from_string(rest);
  if (!frame) return std::nullopt;
  return SystemId{*frame, level};
}

std::optional<SystemId> logic_from_string(const std::string& s) {
  if (s.empty() || s[0] != 'C') return std::nullopt;
  auto frame = frame_class_from_string(s.substr(1));
  if (!frame) return std::nullopt;
  return SystemId{*frame, LangLevel::CapUcl};
}

std::string logic_name(SystemId id) { return "C" + to_string(id.frame); }

std::string to_string(SchemaName s) {
  switch (s) {
    case SchemaName::K:
      return "K";
    case SchemaName::D:
      return "D";
    case SchemaName::T:
      return "T";
    case SchemaName::B:
      return "B";
    case SchemaName::Four:
      return "4";
    case SchemaName::Five:
      return "5";
    case SchemaName::KCap:
      return "KCAP";
    case SchemaName::DCap:
      return "DCAP";
    case SchemaName::TCap:
      return "TCAP";
    case SchemaName::BCap:
      return "BCAP";
    case SchemaName::FourCap:
      return "4CAP";
    case SchemaName::FiveCap:
      return "5CAP";
    case SchemaName::Cap1:
      return "CAP1";
    case SchemaName::Cap2:
      return "CAP2";
    case SchemaName::KUcl:
      return "KUCL";
    case SchemaName::Ucl1:
      return "UCL1";
  }
  return "?";
}

std::optional<SchemaName> schema_from_string(const std::string& s) {
  static const std::map<std::string, SchemaName> table = {
      {"K", SchemaName::K},       {"D", SchemaName::D},
      {"T", SchemaName::T},       {"B", SchemaName::B},
      {"4", SchemaName::Four},    {"5", SchemaName::Five},
      {"KCAP", SchemaName::KCap}, {"DCAP", SchemaName::DCap},
      {"TCAP", SchemaName::TCap}, {"BCAP", SchemaName::BCap},
      {"4CAP", SchemaName::FourCap}, {"5CAP", SchemaName::FiveCap},
      {"CAP1", SchemaName::Cap1}, {"CAP2", SchemaName::Cap2},
      {"KUCL", SchemaName::KUcl}, {"UCL1", SchemaName::Ucl1},
  };
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Schema patterns
// ---------------------------------------------------------------------------

namespace {

// Pattern trees mirror the formula AST with metavariable leaves.  A Cap/Ucl
// node either carries an index metavariable ('I'/'J') or, for the singleton
// form of CAP1, the element metavariable 'i'.
struct Pat {
  enum class K { MetaF, Neg, Impl, Box, Cap, Ucl } k;
  char meta = 0;       // MetaF
  char elem = 0;       // Box subscript metavariable; Cap/Ucl singleton form
  char idx = 0;        // Cap/Ucl index metavariable (0 when singleton form)
  const Pat* a = nullptr;
  const Pat* b = nullptr;
};

const Pat* pool(Pat p) {
  static std::vector<std::unique_ptr<Pat>> storage;
  storage.push_back(std::make_unique<Pat>(p));
  return storage.back().get();
}

const Pat* mf(char m) { return pool({Pat::K::MetaF, m}); }
const Pat* pneg(const Pat* a) {
  Pat p{Pat::K::Neg};
  p.a = a;
  return pool(p);
}
const Pat* pimpl(const Pat* a, const Pat* b) {
  Pat p{Pat::K::Impl};
  p.a = a;
  p.b = b;
  return pool(p);
}
const Pat* pbox(char i, const Pat* a) {
  Pat p{Pat::K::Box};
  p.elem = i;
  p.a = a;
  return pool(p);
}
const Pat* pcap(char I, const Pat* a) {
  Pat p{Pat::K::Cap};
  p.idx = I;
  p.a = a;
  return pool(p);
}
const Pat* pcap_singleton(char i, const Pat* a) {
  Pat p{Pat::K::Cap};
  p.elem = i;
  p.a = a;
  return pool(p);
}
const Pat* pucl(char I, const Pat* a) {
  Pat p{Pat::K::Ucl};
  p.idx = I;
  p.a = a;
  return pool(p);
}
const Pat* pand(const Pat* a, const Pat* b) {
  return pneg(pimpl(a, pneg(b)));
}

enum class SideCond { None, ISubsetJ, ElemInI };

struct Schema {
  const Pat* pattern;
  SideCond cond;
};

// (X phi -> psi-style shapes over a generic unary modality builder.)
template <typename Mod>
Schema k_shape(Mod mod) {
  auto a = mf('a'), b = mf('b');
  return {pimpl(mod(pimpl(a, b)), pimpl(mod(a), mod(b))), SideCond::None};
}
template <typename Mod>
Schema d_shape(Mod mod) {
  auto a = mf('a');
  return {pimpl(mod(a), pneg(mod(pneg(a)))), SideCond::None};
}
template <typename Mod>
Schema t_shape(Mod mod) {
  auto a = mf('a');
  return {pimpl(mod(a), a), SideCond::None};
}
template <typename Mod>
Schema b_shape(Mod mod) {
  auto a = mf('a');
  return {pimpl(pneg(a), mod(pneg(mod(a)))), SideCond::None};
}
template <typename Mod>
Schema four_shape(Mod mod) {
  auto a = mf('a');
  return {pimpl(mod(a), mod(mod(a))), SideCond::None};
}
template <typename Mod>
Schema five_shape(Mod mod) {
  auto a = mf('a');
  return {pimpl(pneg(mod(a)), mod(pneg(mod(a)))), SideCond::None};
}

const Schema& schema_def(SchemaName name) {
  auto boxed = [](const Pat* x) { return pbox('i', x); };
  auto capped = [](const Pat* x) { return pcap('I', x); };
  auto ucled = [](const Pat* x) { return pucl('I', x); };
  static const std::map<SchemaName, Schema> table = [&] {
    std::map<SchemaName, Schema> t;
    t.emplace(SchemaName::K, k_shape(boxed));
    t.emplace(SchemaName::D, d_shape(boxed));
    t.emplace(SchemaName::T, t_shape(boxed));
    t.emplace(SchemaName::B, b_shape(boxed));
    t.emplace(SchemaName::Four, four_shape(boxed));
    t.emplace(SchemaName::Five, five_shape(boxed));
    t.emplace(SchemaName::KCap, k_shape(capped));
    t.emplace(SchemaName::DCap, d_shape(capped));
    t.emplace(SchemaName::TCap, t_shape(capped));
    t.emplace(SchemaName::BCap, b_shape(capped));
    t.emplace(SchemaName::FourCap, four_shape(capped));
    t.emplace(SchemaName::FiveCap, five_shape(capped));
    {
      // CAP1: box_i phi <-> cap_{i} phi, in the expanded encoding.
      auto a = mf('a');
      const Pat* left = pimpl(pbox('i', a), pcap_singleton('i', a));
      const Pat* right = pimpl(pcap_singleton('i', a), pbox('i', a));
      t.emplace(SchemaName::Cap1, Schema{pand(left, right), SideCond::None});
    }
    {
      auto a = mf('a');
      t.emplace(SchemaName::Cap2,
                Schema{pimpl(pcap('I', a), pcap('J', a)), SideCond::ISubsetJ});
    }
    t.emplace(SchemaName::KUcl, k_shape(ucled));
    {
      // UCL1: ucl_I phi -> box_i (phi & ucl_I phi), if i in I.
      auto a = mf('a');
      const Pat* body = pand(a, pucl('I', a));
      t.emplace(SchemaName::Ucl1,
                Schema{pimpl(pucl('I', a), pbox('i', body)), SideCond::ElemInI});
    }
    return t;
  }();
  return table.at(name);
}

bool match_pat(const Pat* p, const Formula& f, Substitution& sub) {
  switch (p->k) {
    case Pat::K::MetaF: {
      auto it = sub.formulas.find(p->meta);
      if (it != sub.formulas.end()) return it->second == f;
      sub.formulas.emplace(p->meta, f);
      return true;
    }
    case Pat::K::Neg:
      return f.is(Kind::Neg) && match_pat(p->a, f.child(), sub);
    case Pat::K::Impl:
      return f.is(Kind::Impl) && match_pat(p->a, f.lhs(), sub) &&
             match_pat(p->b, f.rhs(), sub);
    case Pat::K::Box: {
      if (!f.is(Kind::Box)) return false;
      auto it = sub.elements.find(p->elem);
      if (it != sub.elements.end()) {
        if (it->second != f.box_index()) return false;
      } else {
        sub.elements.emplace(p->elem, f.box_index());
      }
      return match_pat(p->a, f.child(), sub);
    }
    case Pat::K::Cap:
    case Pat::K::Ucl: {
      Kind want = p->k == Pat::K::Cap ? Kind::Cap : Kind::Ucl;
      if (!f.is(want)) return false;
      const Index& I = f.index();
      if (p->idx != 0) {
        auto it = sub.indices.find(p->idx);
        if (it != sub.indices.end()) {
          if (it->second != I) return false;
        } else {
          sub.indices.emplace(p->idx, I);
        }
      } else {
        // Singleton form bound to an element metavariable.
        if (!I.is_singleton()) return false;
        int i = I.elems().front();
        auto it = sub.elements.find(p->elem);
        if (it != sub.elements.end()) {
          if (it->second != i) return false;
        } else {
          sub.elements.emplace(p->elem, i);
        }
      }
      return match_pat(p->a, f.child(), sub);
    }
  }
  return false;
}

bool side_condition_ok(SideCond c, const Substitution& sub) {
  switch (c) {
    case SideCond::None:
      return true;
    case SideCond::ISubsetJ:
      return sub.indices.at('I').subset_of(sub.indices.at('J'));
    case SideCond::ElemInI:
      return sub.indices.at('I').contains(sub.elements.at('i'));
  }
  return false;
}

Formula build_pat(const Pat* p, const Substitution& sub) {
  switch (p->k) {
    case Pat::K::MetaF:
      return sub.formulas.at(p->meta);
    case Pat::K::Neg:
      return Formula::neg(build_pat(p->a, sub));
    case Pat::K::Impl:
      return Formula::impl(build_pat(p->a, sub), build_pat(p->b, sub));
    case Pat::K::Box:
      return Formula::box(sub.elements.at(p->elem), build_pat(p->a, sub));
    case Pat::K::Cap:
      if (p->idx != 0)
        return Formula::cap(sub.indices.at(p->idx), build_pat(p->a, sub));
      return Formula::cap(Index::singleton(sub.elements.at(p->elem)),
                          build_pat(p->a, sub));
    case Pat::K::Ucl:
      return Formula::ucl(sub.indices.at(p->idx), build_pat(p->a, sub));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::optional<Substitution> match_axiom(SchemaName schema, const Formula& f) {
  const Schema& s = schema_def(schema);
  Substitution sub;
  if (!match_pat(s.pattern, f, sub)) return std::nullopt;
  if (!side_condition_ok(s.cond, sub)) return std::nullopt;
  return sub;
}

Formula instantiate_axiom(SchemaName schema, const Substitution& sub) {
  const Schema& s = schema_def(schema);
  if (!side_condition_ok(s.cond, sub))
    throw std::invalid_argument("substitution violates side condition");
  return build_pat(s.pattern, sub);
}

// ---------------------------------------------------------------------------
// System assembly
// ---------------------------------------------------------------------------

SystemSpec assemble_system(SystemId id) {
  SystemSpec spec;
  // Base frame axioms: AX_K = {PC, MP, K, N}; D adds D; T adds T; B, S4 and
  // S5 extend the T system.
  spec.axioms.push_back(SchemaName::K);
  switch (id.frame) {
    case FrameClass::K:
      break;
    case FrameClass::D:
      spec.axioms.push_back(SchemaName::D);
      break;
    case FrameClass::T:
      spec.axioms.push_back(SchemaName::T);
      break;
    case FrameClass::B:
      spec.axioms.push_back(SchemaName::T);
      spec.axioms.push_back(SchemaName::B);
      break;
    case FrameClass::S4:
      spec.axioms.push_back(SchemaName::T);
      spec.axioms.push_back(SchemaName::Four);
      break;
    case FrameClass::S5:
      spec.axioms.push_back(SchemaName::T);
      spec.axioms.push_back(SchemaName::Five);
      break;
  }
  if (id.level == LangLevel::Base) return spec;

  // Characterization of intersection; note the D system gets the same set
  // as K (no DCAP anywhere).
  spec.axioms.push_back(SchemaName::KCap);
  switch (id.frame) {
    case FrameClass::K:
    case FrameClass::D:
      break;
    case FrameClass::T:
      spec.axioms.push_back(SchemaName::TCap);
      break;
    case FrameClass::B:
      spec.axioms.push_back(SchemaName::TCap);
      spec.axioms.push_back(SchemaName::BCap);
      break;
    case FrameClass::S4:
      spec.axioms.push_back(SchemaName::TCap);
      spec.axioms.push_back(SchemaName::FourCap);
      break;
    case FrameClass::S5:
      spec.axioms.push_back(SchemaName::TCap);
      spec.axioms.push_back(SchemaName::FiveCap);
      break;
  }
  spec.axioms.push_back(SchemaName::Cap1);
  spec.axioms.push_back(SchemaName::Cap2);
  spec.has_ncap = true;
  if (id.level == LangLevel::Cap) return spec;

  // Characterization of the transitive closure of union: the same for all
  // six frames.
  spec.axioms.push_back(SchemaName::KUcl);
  spec.axioms.push_back(SchemaName::Ucl1);
  spec.has_ucl2 = true;
  return spec;
}

// ---------------------------------------------------------------------------
// Tautology checking
// ---------------------------------------------------------------------------

namespace {

struct BoolExpr {
  enum class Op { Atom, Not, Implies } op;
  int atom = -1;
  int a = -1, b = -1;
};

int compile_bool(const Formula& f, std::map<Formula, int>& atoms,
                 std::vector<BoolExpr>& prog) {
  switch (f.kind()) {
    case Kind::Neg: {
      int a = compile_bool(f.child(), atoms, prog);
      prog.push_back({BoolExpr::Op::Not, -1, a, -1});
      return static_cast<int>(prog.size()) - 1;
    }
    case Kind::Impl: {
      int a = compile_bool(f.lhs(), atoms, prog);
      int b = compile_bool(f.rhs(), atoms, prog);
      prog.push_back({BoolExpr::Op::Implies, -1, a, b});
      return static_cast<int>(prog.size()) - 1;
    }
    default: {
      auto [it, fresh] = atoms.emplace(f, static_cast<int>(atoms.size()));
      (void)fresh;
      prog.push_back({BoolExpr::Op::Atom, it->second, -1, -1});
      return static_cast<int>(prog.size()) - 1;
    }
  }
}

}  // namespace

bool is_tautology(const Formula& f) {
  std::map<Formula, int> atoms;
  std::vector<BoolExpr> prog;
  int root = compile_bool(f, atoms, prog);
  if (atoms.size() > 20)
    throw std::runtime_error("tautology check limited to 20 distinct atoms");
  const std::size_t n = atoms.size();
  std::vector<bool> value(prog.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t k = 0; k < prog.size(); ++k) {
      const BoolExpr& e = prog[k];
      switch (e.op) {
        case BoolExpr::Op::Atom:
          value[k] = (mask >> e.atom) & 1;
          break;
        case BoolExpr::Op::Not:
          value[k] = !value[e.a];
          break;
        case BoolExpr::Op::Implies:
          value[k] = !value[e.a] || value[e.b];
          break;
      }
    }
    if (!value[root]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Proof scripts
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void script_fail(int lineno, const std::string& msg) {
  throw ParseError(lineno, 1, msg);
}

Index parse_braced_index(std::istringstream& in, int lineno) {
  std::string tok;
  in >> tok;
  if (tok.empty() || tok.front() != '{')
    script_fail(lineno, "expected {index}");
  std::string inner = tok.substr(1);
  std::vector<int> elems;
  bool done = false;
  while (!done) {
    if (!inner.empty() && inner.back() == '}') {
      inner.pop_back();
      done = true;
    }
    if (!inner.empty()) {
      try {
        elems.push_back(std::stoi(inner));
      } catch (const std::exception&) {
        script_fail(lineno, "bad index element: " + inner);
      }
    }
    if (!done) {
      if (!(in >> inner)) script_fail(lineno, "unterminated index");
    }
  }
  if (elems.empty()) script_fail(lineno, "empty index");
  return Index(elems);
}

}  // namespace

ProofScript parse_script(const std::string& text) {
  ProofScript script;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty() || trimmed[0] == '#') continue;

    auto dot = trimmed.find('.');
    if (dot == std::string::npos) script_fail(lineno, "missing line number");
    int number = 0;
    try {
      number = std::stoi(trimmed.substr(0, dot));
    } catch (const std::exception&) {
      script_fail(lineno, "bad line number");
    }
    auto semi = trimmed.rfind(';');
    if (semi == std::string::npos || semi <= dot)
      script_fail(lineno, "missing justification separator ';'");

    Formula f = [&] {
      try {
        return parse(trimmed.substr(dot + 1, semi - dot - 1));
      } catch (const ParseError& e) {
        script_fail(lineno, std::string("formula: ") + e.what());
      }
    }();

    std::istringstream just(trimmed.substr(semi + 1));
    std::string kind;
    just >> kind;
    Justification j{};
    if (kind == "PC") {
      j.type = Justification::Type::PC;
    } else if (kind == "AX") {
      std::string name;
      just >> name;
      auto schema = schema_from_string(name);
      if (!schema) script_fail(lineno, "unknown axiom name: " + name);
      j.type = Justification::Type::Axiom;
      j.axiom = *schema;
    } else if (kind == "MP") {
      j.type = Justification::Type::MP;
      if (!(just >> j.ref1 >> j.ref2))
        script_fail(lineno, "MP needs two line references");
    } else if (kind == "N") {
      j.type = Justification::Type::N;
      if (!(just >> j.element >> j.ref1))
        script_fail(lineno, "N needs an index element and a line reference");
    } else if (kind == "NCAP") {
      j.type = Justification::Type::NCap;
      j.index = parse_braced_index(just, lineno);
      if (!(just >> j.ref1)) script_fail(lineno, "NCAP needs a line reference");
    } else if (kind == "UCL") {
      j.type = Justification::Type::Ucl2;
      j.index = parse_braced_index(just, lineno);
      if (!(just >> j.ref1)) script_fail(lineno, "UCL needs a line reference");
    } else {
      script_fail(lineno, "unknown justification: " + kind);
    }
    script.lines.push_back({number, f, j});
  }
  if (script.lines.empty()) script_fail(lineno, "empty proof script");
  return script;
}

namespace {

/// phi & psi conjunction chain over I in ascending element order,
/// right-nested: for I = {i1 < ... < in} the premise of ucl-2 must be
/// phi -> box_{i1}(phi&psi) & (box_{i2}(phi&psi) & ...).
Formula ucl2_premise(const Formula& phi, const Formula& psi, const Index& I) {
  Formula body = Formula::conj(phi, psi);
  const auto& elems = I.elems();
  Formula chain = Formula::box(elems.back(), body);
  for (auto it = elems.rbegin() + 1; it != elems.rend(); ++it)
    chain = Formula::conj(Formula::box(*it, body), chain);
  return Formula::impl(phi, chain);
}

}  // namespace

CheckResult check_proof(SystemId system, const ProofScript& script) {
  SystemSpec spec = assemble_system(system);
  auto axiom_in_system = [&](SchemaName s) {
    return std::find(spec.axioms.begin(), spec.axioms.end(), s) !=
           spec.axioms.end();
  };

  std::map<int, const ProofLine*> seen;
  for (const ProofLine& line : script.lines) {
    auto fail = [&](const std::string& reason) {
      return CheckResult{false, line.number, reason};
    };
    if (seen.count(line.number)) return fail("duplicate line number");
    if (!level_leq(line.formula.level(), system.level))
      return fail("formula outside the system's language");

    auto lookup = [&](int ref) -> const ProofLine* {
      if (ref >= line.number) return nullptr;
      auto it = seen.find(ref);
      return it == seen.end() ? nullptr : it->second;
    };

    switch (line.just.type) {
      case Justification::Type::PC: {
        bool taut = false;
        try {
          taut = is_tautology(line.formula);
        } catch (const std::exception& e) {
          return fail(e.what());
        }
        if (!taut) return fail("not a propositional tautology");
        break;
      }
      case Justification::Type::Axiom: {
        if (!axiom_in_system(line.just.axiom))
          return fail("axiom " + to_string(line.just.axiom) +
                      " is not part of " + to_string(system));
        if (!match_axiom(line.just.axiom, line.formula))
          return fail("formula is not an instance of " +
                      to_string(line.just.axiom));
        break;
      }
      case Justification::Type::MP: {
        const ProofLine* imp = lookup(line.just.ref1);
        const ProofLine* ante = lookup(line.just.ref2);
        if (!imp || !ante) return fail("bad line reference");
        if (!imp->formula.is(Kind::Impl) ||
            !(imp->formula.lhs() == ante->formula) ||
            !(imp->formula.rhs() == line.formula))
          return fail("modus ponens shape mismatch");
        break;
      }
      case Justification::Type::N: {
        const ProofLine* prem = lookup(line.just.ref1);
        if (!prem) return fail("bad line reference");
        if (!(line.formula ==
              Formula::box(line.just.element, prem->formula)))
          return fail("necessitation shape mismatch");
        break;
      }
      case Justification::Type::NCap: {
        if (!spec.has_ncap)
          return fail("rule NCAP is not part of " + to_string(system));
        const ProofLine* prem = lookup(line.just.ref1);
        if (!prem) return fail("bad line reference");
        if (!(line.formula == Formula::cap(*line.just.index, prem->formula)))
          return fail("cap necessitation shape mismatch");
        break;
      }
      case Justification::Type::Ucl2: {
        if (!spec.has_ucl2)
          return fail("rule UCL is not part of " + to_string(system));
        const ProofLine* prem = lookup(line.just.ref1);
        if (!prem) return fail("bad line reference");
        if (!line.formula.is(Kind::Impl) ||
            !line.formula.rhs().is(Kind::Ucl) ||
            line.formula.rhs().index() != *line.just.index)
          return fail("conclusion must be phi -> [+I]psi");
        Formula phi = line.formula.lhs();
        Formula psi = line.formula.rhs().child();
        if (!(prem->formula == ucl2_premise(phi, psi, *line.just.index)))
          return fail("premise is not the canonical box conjunction");
        break;
      }
    }
    seen.emplace(line.number, &line);
  }
  return {true, 0, ""};
}

}  // namespace modal
