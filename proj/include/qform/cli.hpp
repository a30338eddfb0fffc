#pragma once

// Command-line front end. run() parses arguments, dispatches a subcommand and writes JSON.
// Exit codes: 0 success, 2 validation failure, 3 search budget exhausted, 4 hypothesis violation.

#include "qform/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace qform::cli {

using json_io::Json;

enum ExitCode { kOk = 0, kValidation = 2, kBudget = 3, kHypothesis = 4 };

struct Options {
  std::string command;
  std::string input;
  std::string output;
  std::optional<long> entry_bound;
  std::optional<std::size_t> max_stab;
  std::optional<std::size_t> node_limit;
  bool strict = false;
  std::optional<std::string> a, b;
  std::optional<int> rkq;
};

namespace detail {

using json_io::detail::field;

inline Json read_input(const Options& o) {
  if (o.input.empty()) throw ValidationError("this subcommand needs --input FILE");
  std::string text;
  if (o.input == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(o.input);
    if (!f) throw ValidationError("cannot read " + o.input);
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

inline Int int_option(const std::optional<std::string>& s, const char* name) {
  if (!s) throw ValidationError(std::string("missing --") + name);
  return json_io::int_from_json(Json(*s), std::string("--") + name);
}

inline SearchBudget budget(const Options& o) {
  SearchBudget b = default_budget();
  if (o.entry_bound) b.entry_bound = *o.entry_bound;
  if (o.max_stab) b.max_stab = *o.max_stab;
  if (o.node_limit) b.node_limit = *o.node_limit;
  if (b.entry_bound < 0) throw ValidationError("--entry-bound must be non-negative");
  return b;
}

inline EQForm form_arg(const Json& j, const char* key) { return json_io::form_from_json(field(j, key, ""), std::string("/") + key); }

inline SubgroupRep sub_arg(const Json& j, const char* key, const EQForm& e) {
  return json_io::subgroup_from_json(field(j, key, ""), e.group(), std::string("/") + key);
}

// Form given either as the whole document or under "form".
inline EQForm form_doc(const Json& j) { return j.contains("group") ? json_io::form_from_json(j) : form_arg(j, "form"); }

inline QuasiFormation qf_doc(const Json& j) {
  return j.contains("quasi_formation") ? json_io::qf_from_json(j["quasi_formation"], "/quasi_formation") : json_io::qf_from_json(j);
}

inline Json si_json(const SIReport& r) { return Json{{"size", r.size}, {"reps", json_io::pairs_to_json(r.reps)}}; }

// Re-verifies any document this tool emits.
inline Json validate_doc(const Json& j, const std::string& path) {
  using namespace json_io;
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  if (j.contains("witness")) {
    Json inner = validate_doc(j["witness"], path + "/witness");
    return Json{{"valid", true}, {"kind", "witness"}, {"witness", inner}};
  }
  if (j.contains("quasi_formation")) {
    Json inner = validate_doc(j["quasi_formation"], path + "/quasi_formation");
    return Json{{"valid", true}, {"kind", "witness"}, {"witness", inner}};
  }
  if (j.contains("group")) {
    EQForm e = form_from_json(j, path);
    return Json{{"valid", true}, {"kind", "form"}, {"report", to_json(form_validate(e))}};
  }
  if (j.contains("moves")) {
    MoveSequence s = sequence_from_json(j, path);
    ReplayResult r = replay(s);
    if (!r.ok)
      throw ValidationError("move " + (r.failed_index ? std::to_string(*r.failed_index) : std::string("end")) + ": " + r.reason);
    return Json{{"valid", true}, {"kind", "move-sequence"}, {"moves", s.moves.size()}};
  }
  if (j.contains("ambient")) {
    RUWord w = word_from_json(j, path);
    return Json{{"valid", true}, {"kind", "ru-word"}, {"value", to_json(ru_word_eval(w))}};
  }
  if (j.contains("source") && j.contains("matrix")) {
    iso_from_json(j, path);
    return Json{{"valid", true}, {"kind", "isomorphism"}};
  }
  if (j.contains("form") && j.contains("L") && j.contains("V")) {
    qf_from_json(j, path);
    return Json{{"valid", true}, {"kind", "quasi-formation"}};
  }
  throw SchemaError(path, "unrecognised document");
}

inline Json roundtrip_doc(const Json& j) {
  using namespace json_io;
  if (j.is_object()) {
    if (j.contains("group")) return to_json(form_from_json(j));
    if (j.contains("moves")) return to_json(sequence_from_json(j));
    if (j.contains("ambient")) return to_json(word_from_json(j));
    if (j.contains("source") && j.contains("matrix")) return to_json(iso_from_json(j));
    if (j.contains("form") && j.contains("L") && j.contains("V") && j.size() == 3) return to_json(qf_from_json(j));
  }
  return j;
}

using Handler = std::function<Json(const Options&)>;

inline const std::map<std::string, Handler>& handlers() {
  using namespace json_io;
  static const std::map<std::string, Handler> table = {
      {"validate", [](const Options& o) { return validate_doc(read_input(o), ""); }},
      {"invariants", [](const Options& o) { return to_json(form_validate(form_doc(read_input(o)))); }},
      {"roundtrip", [](const Options& o) { return roundtrip_doc(read_input(o)); }},
      {"perp",
       [](const Options& o) {
         Json j = read_input(o);
         EQForm e = form_arg(j, "form");
         return Json{{"perp", to_json(orthogonal_complement(e, sub_arg(j, "subgroup", e)))}};
       }},
      {"classify",
       [](const Options& o) {
         Json j = read_input(o);
         EQForm e = form_arg(j, "form");
         return to_json(subgroup_classify(e, sub_arg(j, "subgroup", e)));
       }},
      {"metabolic-basis",
       [](const Options& o) {
         Json j = read_input(o);
         EQForm e = form_arg(j, "form");
         MetabolicBasis mb = metabolic_basis(e, sub_arg(j, "L", e));
         FormIso w(block_form(e, mb), e, mb.basis);
         return Json{{"basis", to_json(mb.basis)}, {"d", to_json(mb.d)}, {"witness", to_json(w)}};
       }},
      {"stable-iso",
       [](const Options& o) {
         Json j = read_input(o);
         EQForm e = form_arg(j, "form"), e2 = form_arg(j, "form2");
         StableLagrangianIso r = stable_lagrangian_iso(e, sub_arg(j, "L", e), e2, sub_arg(j, "L2", e2),
                                                       o.strict ? MatchMode::Strict : MatchMode::Stable);
         return Json{{"k", r.k}, {"l", r.l}, {"witness", to_json(r.iso)}};
       }},
      {"ru-wall",
       [](const Options& o) {
         Json j = read_input(o);
         EQForm e = form_arg(j, "form");
         IntMatrix phi = matrix_from_json(field(j, "phi", ""), "/phi", e.dim(), e.dim());
         RUWallWitness w = ru_wall_witness(e, sub_arg(j, "L", e), FormIso(e, e, phi));
         IntMatrix value = ru_word_eval(w.word);
         return Json{{"expected", to_json(w.expected)},
                     {"value", to_json(value)},
                     {"matches", value == w.expected},
                     {"witness", to_json(w.word)}};
       }},
      {"zero-form",
       [](const Options& o) {
         Json j = read_input(o);
         AbGroup q = group_from_json(field(j, "target", ""), "/target");
         Vector bits = vector_from_json(field(j, "v", ""), "/v", q.dim());
         std::vector<int> b;
         for (const Int& x : bits) b.push_back(x == 0 ? 0 : 1);
         QuasiFormation z = zero_formation(q, parity_map(q, b));
         return Json{{"quasi_formation", to_json(z)}, {"elementary", is_elementary(z)}};
       }},
      {"bar",
       [](const Options& o) {
         QuasiFormation q = qf_doc(read_input(o));
         return Json{{"bar", to_json(bar_reduce(q))}, {"witness", to_json(unbar_isomorphism(q))}};
       }},
      {"elementary",
       [](const Options& o) {
         QuasiFormation q = qf_doc(read_input(o));
         return Json{{"elementary", is_elementary(q)},
                     {"L_element", is_L_element(q)},
                     {"alpha", to_json(alpha_invariant(q))},
                     {"beta", to_json(beta_invariant(q))}};
       }},
      {"ltriv",
       [](const Options& o) {
         LGroupDecomposition d = l_group_trivialize(qf_doc(read_input(o)));
         return Json{{"J", to_json(d.J)},
                     {"X", to_json(d.X)},
                     {"M_prime", to_json(d.M_prime)},
                     {"H", to_json(d.H)},
                     {"L_prime", to_json(d.L_prime)},
                     {"K_prime", to_json(d.K_prime)},
                     {"zero_part", to_json(d.zero_part)},
                     {"cancel_part", to_json(d.cancel_part)},
                     {"hyperbolic_witness", to_json(d.hyperbolic_witness)},
                     {"witness", to_json(d.skeleton)}};
       }},
      {"jacobi",
       [](const Options& o) {
         Json j = read_input(o);
         EQForm e = form_arg(j, "form");
         std::optional<MatchMode> mode;
         if (o.strict) mode = MatchMode::Strict;
         JacobiWitness w = jacobi_witness(e, sub_arg(j, "K", e), sub_arg(j, "L", e), sub_arg(j, "V", e), mode);
         return Json{{"k", w.k}, {"phi", to_json(w.phi)}, {"witness", to_json(w.sequence)}};
       }},
      {"kappa",
       [](const Options& o) {
         if (o.a || o.b) {
           Int a = int_option(o.a, "a"), b = int_option(o.b, "b");
           return Json{{"direct", to_json(kappa(e_ab(a, b)))}, {"formula", to_json(kappa_formula(a, b))}};
         }
         return Json{{"kappa", to_json(kappa(form_doc(read_input(o))))}};
       }},
      {"si",
       [](const Options& o) {
         if (o.a || o.b) return si_json(si_enumerate(int_option(o.a, "a"), int_option(o.b, "b")));
         SIReport r = si_hyp(form_doc(read_input(o)));
         Json j = si_json(r);
         Json forms = Json::array();
         for (const EQForm& f : r.forms) forms.push_back(to_json(f));
         j["forms"] = forms;
         j["trace"] = r.trace;
         if (r.ab) j["ab"] = Json::array({to_json(r.ab->first), to_json(r.ab->second)});
         return j;
       }},
      {"stable-class",
       [](const Options& o) {
         if (!o.rkq) throw ValidationError("missing --rkq");
         Int a = o.a ? int_option(o.a, "a") : Int(0), b = o.b ? int_option(o.b, "b") : Int(0);
         StableClassCounts c = stable_class_report(*o.rkq, a, b);
         return Json{{"Sst", c.sst}, {"Sst_f", c.sst_f}};
       }},
      {"oracle-lagrangians",
       [](const Options& o) {
         std::vector<SubgroupRep> ls = enumerate_lagrangians(form_doc(read_input(o)), budget(o));
         Json a = Json::array();
         for (const auto& l : ls) a.push_back(to_json(l));
         return Json{{"count", ls.size()}, {"lagrangians", a}};
       }},
      {"oracle-iso",
       [](const Options& o) {
         Json j = read_input(o);
         SearchBudget b = budget(o);
         if (field(j, "source", "").contains("form")) {
           QuasiFormation s = qf_from_json(j["source"], "/source"), t = qf_from_json(field(j, "target", ""), "/target");
           StableSearchResult r = search_stable_isomorphism(s, t, b);
           Json out{{"status", to_string(r.status)}};
           if (r.witness) {
             out["k"] = r.witness->k;
             out["l"] = r.witness->l;
             out["witness"] = to_json(r.witness->iso);
           }
           return out;
         }
         EQForm s = form_arg(j, "source"), t = form_arg(j, "target");
         if (o.max_stab && *o.max_stab > 0) {
           StableSearchResult r = search_stable_isomorphism(s, t, b);
           Json out{{"status", to_string(r.status)}};
           if (r.witness) {
             out["k"] = r.witness->k;
             out["l"] = r.witness->l;
             out["witness"] = to_json(r.witness->iso);
           }
           return out;
         }
         IsoSearchResult r = search_isomorphism(s, t, b);
         Json out{{"status", to_string(r.status)}, {"nodes", r.nodes}};
         if (r.iso) out["witness"] = to_json(*r.iso);
         return out;
       }},
      {"oracle-si",
       [](const Options& o) { return si_json(brute_si(int_option(o.a, "a"), int_option(o.b, "b"))); }},
  };
  return table;
}

inline Json error_json(const std::string& kind, const std::string& message) {
  return Json{{"error", kind}, {"message", message}};
}

}  // namespace detail

inline std::vector<std::string> subcommands() {
  std::vector<std::string> out;
  for (const auto& [name, h] : detail::handlers()) out.push_back(name);
  return out;
}

// Runs one invocation; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact toolkit for quadratic forms with values in abelian groups", "qform"};
  std::string names;
  for (const auto& n : subcommands()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("command", o.command, "Subcommand: " + names)->required();
  app.add_option("--input", o.input, "JSON input file ('-' for stdin)");
  app.add_option("--output", o.output, "Write JSON here instead of stdout");
  app.add_option("--entry-bound", o.entry_bound, "Oracle: max |matrix entry|");
  app.add_option("--max-stab", o.max_stab, "Oracle: max hyperbolic stabilizations");
  app.add_option("--node-limit", o.node_limit, "Oracle: backtracking node cap (default QFORM_NODE_LIMIT)");
  app.add_flag("--strict", o.strict, "Use strict matching instead of stable matching");
  app.add_option("--a", o.a, "Integer a");
  app.add_option("--b", o.b, "Integer b");
  app.add_option("--rkq", o.rkq, "Rank of Q (0, 1 or 2)");
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    out << detail::error_json("usage", e.what()).dump() << "\n";
    return kValidation;
  }

  Json result;
  int code = kOk;
  auto it = detail::handlers().find(o.command);
  try {
    if (it == detail::handlers().end()) throw ValidationError("unknown subcommand '" + o.command + "'; expected one of " + names);
    result = it->second(o);
  } catch (const BudgetExhausted& e) {
    result = detail::error_json("budget exhausted", e.what());
    code = kBudget;
  } catch (const HypothesisError& e) {
    result = detail::error_json(e.hypothesis(), e.what());
    code = kHypothesis;
  } catch (const ValidationError& e) {
    result = detail::error_json("validation", e.what());
    code = kValidation;
  } catch (const Error& e) {
    result = detail::error_json("validation", e.what());
    code = kValidation;
  } catch (const Json::exception& e) {
    result = detail::error_json("validation", e.what());
    code = kValidation;
  }
  if (code != kOk) err << result["message"].get<std::string>() << "\n";

  const std::string text = json_io::canonical(result) + "\n";
  if (!o.output.empty() && code == kOk) {
    std::ofstream f(o.output);
    if (!f) {
      err << "cannot write " << o.output << "\n";
      return kValidation;
    }
    f << text;
  } else {
    out << text;
  }
  return code;
}

}  // namespace qform::cli
