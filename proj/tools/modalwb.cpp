// modalwb: command-line workbench for modal logics with intersection and
// transitive closure of union.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "modal/closure.hpp"
#include "modal/construction.hpp"
#include "modal/formula.hpp"
#include "modal/model.hpp"
#include "modal/proof.hpp"
#include "modal/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnknown = 3;

modal::Formula parse_or_exit(const std::string& text) {
  try {
    return modal::parse(text);
  } catch (const modal::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::exit(kExitUsage);
  }
}

modal::SystemId logic_or_exit(const std::string& name) {
  auto id = modal::logic_from_string(name);
  if (!id) {
    std::cerr << "error: unknown logic '" << name
              << "' (expected CK, CD, CT, CB, CS4 or CS5)\n";
    std::exit(kExitUsage);
  }
  return *id;
}

modal::Index iota_for(const modal::Formula& alpha, const std::string& flag) {
  std::vector<int> elems;
  if (!flag.empty()) {
    std::istringstream in(flag);
    int i;
    while (in >> i) elems.push_back(i);
    if (elems.empty()) {
      std::cerr << "error: empty index set\n";
      std::exit(kExitUsage);
    }
  } else {
    auto occurring = alpha.index_elements();
    elems.assign(occurring.begin(), occurring.end());
    if (elems.empty()) elems.push_back(1);
  }
  return modal::Index(elems);
}

modal::Signature signature_or_exit(modal::SystemId logic,
                                   const modal::Formula& alpha,
                                   const std::string& iota_flag) {
  try {
    return modal::Signature::make(logic, alpha, iota_for(alpha, iota_flag));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::exit(kExitUsage);
  }
}

std::string read_file_or_exit(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(kExitUsage);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::ordered_json verdict_json(const modal::Verdict& v) {
  nlohmann::ordered_json j;
  switch (v.kind) {
    case modal::Verdict::Kind::Sat:
      j["verdict"] = "sat";
      j["state"] = v.model->state_names()[v.state];
      j["model"] = v.model->to_json();
      break;
    case modal::Verdict::Kind::Unsat:
      j["verdict"] = "unsat";
      j["evidence"] = v.detail;
      break;
    case modal::Verdict::Kind::Unknown:
      j["verdict"] = "unknown";
      j["reason"] = v.detail;
      break;
  }
  return j;
}

int exit_for(const modal::Verdict& v) {
  return v.definite() ? kExitOk : kExitUnknown;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for modal logics with intersection and union-closure"};
  app.require_subcommand(1);

  std::string formula_text, model_path, logic_name, system_name, script_path;
  std::string iota_flag, elements_flag = "1 2";
  int depth = -1;
  int bound = 3;  // oracle state bound for `valid`
  int sweep_bound = 4;
  std::uint64_t budget = 200000;
  int max_connectives = 4, max_depth = 2;
  bool json_out = false, strict6 = false;

  auto add_json = [&](CLI::App* cmd) {
    cmd->add_flag("--json", json_out, "machine-readable output");
  };

  auto* cmd_parse = app.add_subcommand("parse", "parse and render a formula");
  cmd_parse->add_option("-f,--formula", formula_text)->required();
  add_json(cmd_parse);

  auto* cmd_check = app.add_subcommand("check-model",
                                       "evaluate a formula on a model");
  cmd_check->add_option("-m,--model", model_path)->required();
  cmd_check->add_option("-f,--formula", formula_text)->required();
  add_json(cmd_check);

  auto* cmd_prove = app.add_subcommand("prove", "check a proof script");
  cmd_prove->add_option("-s,--system", system_name)->required();
  cmd_prove->add_option("-p,--proof", script_path)->required();
  add_json(cmd_prove);

  auto* cmd_closure = app.add_subcommand("closure", "list cl(sigma)");
  cmd_closure->add_option("-l,--logic", logic_name)->required();
  cmd_closure->add_option("-f,--formula", formula_text)->required();
  cmd_closure->add_option("-i,--iota", iota_flag, "index set, e.g. \"1 2\"");
  cmd_closure->add_flag("--strict-6", strict6,
                        "literal reading of closure condition 6");
  add_json(cmd_closure);

  auto* cmd_atoms = app.add_subcommand("atoms", "list the atoms of a signature");
  cmd_atoms->add_option("-l,--logic", logic_name)->required();
  cmd_atoms->add_option("-f,--formula", formula_text)->required();
  cmd_atoms->add_option("-i,--iota", iota_flag);
  add_json(cmd_atoms);

  auto* cmd_build = app.add_subcommand("build", "emit the standard model");
  cmd_build->add_option("-l,--logic", logic_name)->required();
  cmd_build->add_option("-f,--formula", formula_text)->required();
  cmd_build->add_option("-i,--iota", iota_flag);
  cmd_build->add_option("-d,--depth", depth);

  auto* cmd_audit = app.add_subcommand("audit", "run the four audits");
  cmd_audit->add_option("-l,--logic", logic_name)->required();
  cmd_audit->add_option("-f,--formula", formula_text)->required();
  cmd_audit->add_option("-i,--iota", iota_flag);
  cmd_audit->add_option("-d,--depth", depth);

  auto* cmd_sat = app.add_subcommand("sat", "closure-pipeline satisfiability");
  cmd_sat->add_option("-l,--logic", logic_name)->required();
  cmd_sat->add_option("-f,--formula", formula_text)->required();
  cmd_sat->add_option("-d,--depth", depth);
  add_json(cmd_sat);

  auto* cmd_valid = app.add_subcommand("valid", "cross-validated validity");
  cmd_valid->add_option("-l,--logic", logic_name)->required();
  cmd_valid->add_option("-f,--formula", formula_text)->required();
  cmd_valid->add_option("-d,--depth", depth);
  cmd_valid->add_option("--bound", bound, "oracle state bound");
  add_json(cmd_valid);

  auto* cmd_oracle = app.add_subcommand("oracle-compare",
                                        "engine agreement sweep");
  cmd_oracle->add_option("-l,--logic", logic_name)->required();
  cmd_oracle->add_option("--max-connectives", max_connectives);
  cmd_oracle->add_option("--max-depth", max_depth);
  cmd_oracle->add_option("--elements", elements_flag);
  cmd_oracle->add_option("--bound", sweep_bound);
  cmd_oracle->add_option("--budget", budget);
  add_json(cmd_oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cmd_parse) {
      modal::Formula f = parse_or_exit(formula_text);
      if (json_out) {
        nlohmann::ordered_json j;
        j["formula"] = modal::render(f);
        j["modal_depth"] = f.modal_depth();
        std::cout << j.dump() << "\n";
      } else {
        std::cout << modal::render(f) << "\n";
      }
      return kExitOk;
    }

    if (*cmd_check) {
      modal::Formula f = parse_or_exit(formula_text);
      nlohmann::json mj;
      try {
        mj = nlohmann::json::parse(read_file_or_exit(model_path));
      } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
      }
      modal::KripkeModel m = modal::KripkeModel::from_json(mj);
      modal::Evaluator ev(m);
      const std::vector<bool>& truth = ev.truth(f);
      if (json_out) {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (int s = 0; s < m.num_states(); ++s)
          j[m.state_names()[s]] = static_cast<bool>(truth[s]);
        std::cout << j.dump() << "\n";
      } else {
        for (int s = 0; s < m.num_states(); ++s)
          std::cout << m.state_names()[s] << ": "
                    << (truth[s] ? "true" : "false") << "\n";
      }
      return kExitOk;
    }

    if (*cmd_prove) {
      auto system = modal::system_from_string(system_name);
      if (!system) {
        std::cerr << "error: unknown system '" << system_name << "'\n";
        return kExitUsage;
      }
      modal::ProofScript script;
      try {
        script = modal::parse_script(read_file_or_exit(script_path));
      } catch (const modal::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
      }
      modal::CheckResult result = modal::check_proof(*system, script);
      if (json_out) {
        nlohmann::ordered_json j;
        j["ok"] = result.ok;
        if (result.ok) {
          j["conclusion"] = modal::render(script.conclusion());
        } else {
          j["line"] = result.line;
          j["reason"] = result.reason;
        }
        std::cout << j.dump() << "\n";
      } else if (result.ok) {
        std::cout << "ok: " << modal::render(script.conclusion()) << "\n";
      } else {
        std::cout << "rejected at line " << result.line << ": "
                  << result.reason << "\n";
      }
      return result.ok ? kExitOk : kExitViolation;
    }

    if (*cmd_closure) {
      modal::SystemId logic = logic_or_exit(logic_name);
      modal::Formula alpha = parse_or_exit(formula_text);
      modal::Signature sig = signature_or_exit(logic, alpha, iota_flag);
      modal::ClosureSet cl = modal::closure(
          sig, strict6 ? modal::Closure6::StrictSupersets
                       : modal::Closure6::MeetingIndices);
      if (json_out) {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const modal::Formula& f : cl.sorted())
          j.push_back(modal::render(f));
        std::cout << j.dump() << "\n";
      } else {
        for (const modal::Formula& f : cl.sorted())
          std::cout << modal::render(f) << "\n";
      }
      return kExitOk;
    }

    if (*cmd_atoms) {
      modal::SystemId logic = logic_or_exit(logic_name);
      modal::Formula alpha = parse_or_exit(formula_text);
      modal::Signature sig = signature_or_exit(logic, alpha, iota_flag);
      modal::AtomSet atoms(modal::closure(sig));
      if (json_out) {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (int a = 0; a < atoms.count(); ++a) {
          nlohmann::ordered_json members = nlohmann::ordered_json::array();
          for (const modal::Formula& f : atoms.members_of(a))
            members.push_back(modal::render(f));
          j.push_back(members);
        }
        std::cout << j.dump() << "\n";
      } else {
        for (int a = 0; a < atoms.count(); ++a) {
          std::cout << "atom " << a << ":";
          for (const modal::Formula& f : atoms.members_of(a))
            std::cout << " " << modal::render(f);
          std::cout << "\n";
        }
      }
      return kExitOk;
    }

    if (*cmd_build || *cmd_audit) {
      modal::SystemId logic = logic_or_exit(logic_name);
      modal::Formula alpha = parse_or_exit(formula_text);
      modal::Signature sig = signature_or_exit(logic, alpha, iota_flag);
      modal::AtomSet atoms(modal::closure(sig));
      int d = depth >= 0 ? depth : modal::default_depth(alpha);
      modal::StandardModel m = modal::build_standard_model(atoms, d);
      if (*cmd_build) {
        std::cout << m.model.to_json().dump(2) << "\n";
        return kExitOk;
      }
      nlohmann::ordered_json reports = nlohmann::ordered_json::array();
      bool all_pass = true;
      for (const modal::AuditReport& r :
           {modal::audit_canonicity(atoms), modal::audit_standardness(m),
            modal::audit_truth(m), modal::audit_existence(m)}) {
        all_pass = all_pass && r.pass();
        reports.push_back(r.to_json());
      }
      std::cout << reports.dump(2) << "\n";
      return all_pass ? kExitOk : kExitViolation;
    }

    if (*cmd_sat) {
      modal::SystemId logic = logic_or_exit(logic_name);
      modal::Formula f = parse_or_exit(formula_text);
      int d = depth >= 0 ? depth : modal::default_depth(f);
      modal::Verdict v = modal::closure_sat(f, logic, d);
      if (json_out) {
        std::cout << verdict_json(v).dump() << "\n";
      } else {
        switch (v.kind) {
          case modal::Verdict::Kind::Sat:
            std::cout << "sat at " << v.model->state_names()[v.state] << "\n";
            break;
          case modal::Verdict::Kind::Unsat:
            std::cout << "unsat (" << v.detail << ")\n";
            break;
          case modal::Verdict::Kind::Unknown:
            std::cout << "unknown (" << v.detail << ")\n";
            break;
        }
      }
      return exit_for(v);
    }

    if (*cmd_valid) {
      modal::SystemId logic = logic_or_exit(logic_name);
      modal::Formula f = parse_or_exit(formula_text);
      int d = depth >= 0 ? depth : modal::default_depth(f) + 1;
      modal::ValidityResult r = modal::decide_valid(
          f, logic, d, modal::BruteLimits{.max_states = bound, .budget = budget});
      if (json_out) {
        nlohmann::ordered_json j;
        j["verdict"] = r.verdict == modal::Validity::Valid     ? "valid"
                       : r.verdict == modal::Validity::Invalid ? "invalid"
                                                               : "unknown";
        j["detail"] = r.detail;
        if (r.witness) {
          j["countermodel"] = r.witness->to_json();
          j["state"] = r.witness->state_names()[r.state];
        }
        std::cout << j.dump() << "\n";
      } else {
        switch (r.verdict) {
          case modal::Validity::Valid:
            std::cout << "valid\n";
            break;
          case modal::Validity::Invalid:
            std::cout << "invalid (countermodel at "
                      << r.witness->state_names()[r.state] << ")\n";
            break;
          case modal::Validity::Unknown:
            std::cout << "unknown (" << r.detail << ")\n";
            break;
        }
      }
      return r.verdict == modal::Validity::Unknown ? kExitUnknown : kExitOk;
    }

    if (*cmd_oracle) {
      modal::SystemId logic = logic_or_exit(logic_name);
      std::istringstream in(elements_flag);
      std::vector<int> elems;
      int i;
      while (in >> i) elems.push_back(i);
      if (elems.empty()) {
        std::cerr << "error: empty element set\n";
        return kExitUsage;
      }
      std::vector<modal::Formula> corpus = modal::enumerate_formulas(
          max_connectives, max_depth, modal::Index(elems), "p");
      modal::AgreementReport report = modal::oracle_compare(
          logic, corpus,
          modal::BruteLimits{.max_states = sweep_bound, .budget = budget});
      if (json_out) {
        nlohmann::ordered_json j;
        j["formulas"] = report.formulas;
        j["both_definite"] = report.both_definite;
        j["disagreements"] = report.disagreements;
        std::cout << j.dump() << "\n";
      } else {
        std::cout << report.formulas << " formulas, " << report.both_definite
                  << " with two definite verdicts, "
                  << report.disagreements.size() << " disagreements\n";
        for (const std::string& d2 : report.disagreements)
          std::cout << "  " << d2 << "\n";
      }
      return report.pass() ? kExitOk : kExitViolation;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
