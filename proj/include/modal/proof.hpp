#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modal/formula.hpp"
#include "modal/model.hpp"

namespace modal {

/// One of the eighteen Hilbert systems: a base frame system at one of the
/// three language levels.  Spelled AX_K ... AX_S5 (boxes only),
/// AX_IK ... AX_IS5 (adds intersection), AX_CK ... AX_CS5 (adds the
/// transitive closure of union on top).
struct SystemId {
  FrameClass frame;
  LangLevel level;

  friend bool operator==(const SystemId&, const SystemId&) = default;
};

std::string to_string(SystemId id);
std::optional<SystemId> system_from_string(const std::string& s);
/// Short logic names for the six top-level logics: CK, CD, CT, CB, CS4, CS5.
std::optional<SystemId> logic_from_string(const std::string& s);
std::string logic_name(SystemId id);

enum class SchemaName {
  K,
  D,
  T,
  B,
  Four,
  Five,
  KCap,
  DCap,
  TCap,
  BCap,
  FourCap,
  FiveCap,
  Cap1,
  Cap2,
  KUcl,
  Ucl1,
};

std::string to_string(SchemaName s);
std::optional<SchemaName> schema_from_string(const std::string& s);

/// Assignment of the schema's metavariables: formula metavariables by
/// letter ('a' for phi, 'b' for psi), index metavariables ('I', 'J'),
/// element metavariables ('i').
struct Substitution {
  std::map<char, Formula> formulas;
  std::map<char, Index> indices;
  std::map<char, int> elements;
};

/// Matches a ground formula against a schema, side conditions included.
std::optional<Substitution> match_axiom(SchemaName schema, const Formula& f);

/// Builds the ground instance of a schema from a full substitution.  Throws
/// if a needed metavariable is missing or a side condition is violated.
Formula instantiate_axiom(SchemaName schema, const Substitution& sub);

struct SystemSpec {
  std::vector<SchemaName> axioms;  // deterministic order
  bool has_ncap = false;           // rule N-cap
  bool has_ucl2 = false;           // rule ucl-2
};

SystemSpec assemble_system(SystemId id);

/// Truth-table tautology check treating propositions and maximal modal
/// subformulas as atoms.  Throws on more than 20 distinct atoms.
bool is_tautology(const Formula& f);

// --- proof scripts ---------------------------------------------------------

struct Justification {
  enum class Type { PC, Axiom, MP, N, NCap, Ucl2 };
  Type type;
  SchemaName axiom = SchemaName::K;        // Axiom
  int element = 0;                         // N
  std::optional<Index> index;              // NCap / Ucl2
  int ref1 = 0, ref2 = 0;                  // line references
};

struct ProofLine {
  int number;
  Formula formula;
  Justification just;
};

struct ProofScript {
  std::vector<ProofLine> lines;
  const Formula& conclusion() const { return lines.back().formula; }
};

/// Line format: `n. <formula> ; <JUST>` with JUST one of
/// `PC` | `AX <name>` | `MP j k` | `N i j` | `NCAP {I} j` | `UCL {I} j`.
/// Blank lines and lines starting with '#' are ignored.
ProofScript parse_script(const std::string& text);

struct CheckResult {
  bool ok;
  int line = 0;          // offending line number when !ok
  std::string reason;
};

CheckResult check_proof(SystemId system, const ProofScript& script);

}  // namespace modal
