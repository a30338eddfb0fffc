#pragma once

// JSON encoding of groups, forms, subgroups, isomorphisms and move sequences.
// Integers beyond 53 bits are written as decimal strings; both spellings are accepted on input.

#include "qform/qform.hpp"

#include <json.hpp>

#include <string>

namespace qform::json_io {

using Json = nlohmann::json;

// Malformed document; the message names the offending field.
class SchemaError : public ValidationError {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : ValidationError("at " + (path.empty() ? std::string("/") : path) + ": " + what) {}
};

namespace detail {

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "/" + key, "missing field");
  return *it;
}

inline const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

}  // namespace detail

// ---- writers ----

inline Json to_json(const Int& x) {
  constexpr std::int64_t limit = std::int64_t{1} << 53;
  if (x < limit && x > -limit) return Json(static_cast<std::int64_t>(x));
  return Json(x.str());
}

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (const Int& x : v) a.push_back(to_json(x));
  return a;
}

inline Json to_json(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

inline Json to_json(const AbGroup& g) { return Json{{"free_rank", g.free_rank()}, {"torsion", to_json(g.torsion())}}; }

inline Json to_json(const EQForm& e) {
  Json j{{"group", to_json(e.group())}, {"lambda", to_json(e.lambda())}, {"target", to_json(e.target())},
         {"mu", to_json(e.mu().matrix())}};
  if (e.v()) j["v"] = to_json(e.v()->matrix().row(0));
  return j;
}

inline Json to_json(const SubgroupRep& s) {
  Json gens = Json::array();
  for (const Vector& g : s.generators()) gens.push_back(to_json(g));
  return Json{{"generators", gens}};
}

inline Json to_json(const QuasiFormation& q) { return Json{{"form", to_json(q.form)}, {"L", to_json(q.L)}, {"V", to_json(q.V)}}; }

inline Json to_json(const FormIso& f) {
  return Json{{"source", to_json(f.source())}, {"target", to_json(f.target())}, {"matrix", to_json(f.matrix())}};
}

inline Json to_json(const Move& mv) {
  return std::visit(
      [](const auto& m) -> Json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Stab>) {
          return Json{{"type", "stab"}};
        } else if constexpr (std::is_same_v<T, Destab>) {
          return Json{{"type", "destab"}, {"result", to_json(m.result)}, {"iso", to_json(m.iso)}};
        } else if constexpr (std::is_same_v<T, FlipL>) {
          return Json{{"type", "flip"},
                      {"iso", to_json(m.iso)},
                      {"complement", to_json(m.complement)},
                      {"lagrangian", to_json(m.lagrangian)}};
        } else {
          return Json{{"type", "iso"}, {"iso", to_json(m.iso)}};
        }
      },
      mv);
}

inline Json to_json(const MoveSequence& s) {
  Json moves = Json::array();
  for (const Move& m : s.moves) moves.push_back(to_json(m));
  return Json{{"start", to_json(s.start)}, {"end", to_json(s.end)}, {"moves", moves}};
}

inline Json to_json(const RUGenerator& g) {
  if (const Keep* k = std::get_if<Keep>(&g)) return Json{{"type", "keep"}, {"f", to_json(k->f)}};
  const Flip& f = std::get<Flip>(g);
  return Json{{"type", "flip"}, {"iso", to_json(f.iso)}, {"complement", to_json(f.complement)}, {"lagrangian", to_json(f.lagrangian)}};
}

inline Json to_json(const RUWord& w) {
  Json gens = Json::array();
  for (const RUGenerator& g : w.generators) gens.push_back(to_json(g));
  return Json{{"ambient", to_json(w.ambient)}, {"lagrangian", to_json(w.lagrangian)}, {"generators", gens}};
}

inline Json to_json(const FormReport& r) {
  Json j{{"free", r.free}, {"nonsingular", r.nonsingular}, {"even", r.even}, {"full", r.full}, {"rank", r.rank}};
  j["geometric"] = r.geometric ? Json(*r.geometric) : Json(nullptr);
  return j;
}

inline Json to_json(const SubgroupFlags& f) {
  return Json{{"isotropic", f.isotropic},
              {"mu_vanishes", f.mu_vanishes},
              {"half_rank_summand", f.half_rank_summand},
              {"free_lagrangian", f.free_lagrangian},
              {"t_lagrangian", f.t_lagrangian}};
}

inline Json pairs_to_json(const std::vector<IntPair>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(Json::array({to_json(p.first), to_json(p.second)}));
  return a;
}

// ---- readers ----

inline Int int_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Int(j.get<std::uint64_t>()) : Int(j.get<std::int64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos) return Int(s);
  }
  throw SchemaError(path, "expected an integer");
}

inline Vector vector_from_json(const Json& j, const std::string& path, std::optional<std::size_t> len = std::nullopt) {
  detail::array(j, path);
  if (len && j.size() != *len) throw SchemaError(path, "expected " + std::to_string(*len) + " entries, got " + std::to_string(j.size()));
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(int_from_json(j[i], path + "/" + std::to_string(i)));
  return v;
}

inline IntMatrix matrix_from_json(const Json& j, const std::string& path, std::size_t rows, std::size_t cols) {
  detail::array(j, path);
  if (j.size() != rows) throw SchemaError(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) m.set_row(i, vector_from_json(j[i], path + "/" + std::to_string(i), cols));
  return m;
}

// Square matrix of unknown size.
inline IntMatrix square_from_json(const Json& j, const std::string& path) {
  detail::array(j, path);
  return matrix_from_json(j, path, j.size(), j.size());
}

inline std::size_t size_from_json(const Json& j, const std::string& path) {
  Int x = int_from_json(j, path);
  if (x < 0 || x > 1'000'000) throw SchemaError(path, "expected a small non-negative integer");
  return static_cast<std::size_t>(x);
}

inline AbGroup group_from_json(const Json& j, const std::string& path) {
  std::size_t r = size_from_json(detail::field(j, "free_rank", path), path + "/free_rank");
  Vector t = j.contains("torsion") ? vector_from_json(j["torsion"], path + "/torsion") : Vector{};
  try {
    return AbGroup(r, t);
  } catch (const ValidationError& e) {
    throw SchemaError(path + "/torsion", e.what());
  }
}

inline EQForm form_from_json(const Json& j, const std::string& path = "") {
  AbGroup g = group_from_json(detail::field(j, "group", path), path + "/group");
  AbGroup q = group_from_json(detail::field(j, "target", path), path + "/target");
  IntMatrix lam = matrix_from_json(detail::field(j, "lambda", path), path + "/lambda", g.dim(), g.dim());
  IntMatrix mu = matrix_from_json(detail::field(j, "mu", path), path + "/mu", q.dim(), g.dim());
  std::optional<GroupHom> v;
  if (j.contains("v") && !j["v"].is_null()) {
    Vector bits = vector_from_json(j["v"], path + "/v", q.dim());
    IntMatrix vm(1, q.dim());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != 0 && bits[i] != 1) throw SchemaError(path + "/v/" + std::to_string(i), "expected 0 or 1");
      vm(0, i) = bits[i];
    }
    try {
      v = GroupHom(q, z2_group(), vm);
    } catch (const ValidationError& e) {
      throw SchemaError(path + "/v", e.what());
    }
  }
  try {
    return EQForm(g, lam, GroupHom(g, q, mu), v);
  } catch (const ValidationError& e) {
    throw SchemaError(path, e.what());
  }
}

inline SubgroupRep subgroup_from_json(const Json& j, const AbGroup& ambient, const std::string& path) {
  const Json& gens = detail::array(detail::field(j, "generators", path), path + "/generators");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < gens.size(); ++i)
    out.push_back(vector_from_json(gens[i], path + "/generators/" + std::to_string(i), ambient.dim()));
  try {
    return SubgroupRep(ambient, out);
  } catch (const ValidationError& e) {
    throw SchemaError(path + "/generators", e.what());
  }
}

inline QuasiFormation qf_from_json(const Json& j, const std::string& path = "") {
  EQForm f = form_from_json(detail::field(j, "form", path), path + "/form");
  QuasiFormation q{f, subgroup_from_json(detail::field(j, "L", path), f.group(), path + "/L"),
                   subgroup_from_json(detail::field(j, "V", path), f.group(), path + "/V")};
  if (auto why = check_quasi_formation(q)) throw SchemaError(path, *why);
  return q;
}

inline FormIso iso_from_json(const Json& j, const std::string& path = "") {
  EQForm s = form_from_json(detail::field(j, "source", path), path + "/source");
  EQForm t = form_from_json(detail::field(j, "target", path), path + "/target");
  IntMatrix m = matrix_from_json(detail::field(j, "matrix", path), path + "/matrix", t.dim(), s.dim());
  if (auto why = FormIso::check(s, t, m)) throw SchemaError(path + "/matrix", "not a form isomorphism: " + *why);
  return FormIso(s, t, m);
}

inline std::string type_of(const Json& j, const std::string& path) {
  const Json& t = detail::field(j, "type", path);
  if (!t.is_string()) throw SchemaError(path + "/type", "expected a string");
  return t.get<std::string>();
}

inline Move move_from_json(const Json& j, const std::string& path) {
  std::string type = type_of(j, path);
  if (type == "stab") return Stab{};
  if (type == "destab")
    return Destab{qf_from_json(detail::field(j, "result", path), path + "/result"),
                  iso_from_json(detail::field(j, "iso", path), path + "/iso")};
  if (type == "iso") return ApplyIso{iso_from_json(detail::field(j, "iso", path), path + "/iso")};
  if (type == "flip") {
    EQForm c = form_from_json(detail::field(j, "complement", path), path + "/complement");
    return FlipL{iso_from_json(detail::field(j, "iso", path), path + "/iso"), c,
                 subgroup_from_json(detail::field(j, "lagrangian", path), c.group(), path + "/lagrangian")};
  }
  throw SchemaError(path + "/type", "unknown move type '" + type + "'");
}

inline MoveSequence sequence_from_json(const Json& j, const std::string& path = "") {
  MoveSequence s{qf_from_json(detail::field(j, "start", path), path + "/start"),
                 qf_from_json(detail::field(j, "end", path), path + "/end"),
                 {}};
  const Json& moves = detail::array(detail::field(j, "moves", path), path + "/moves");
  for (std::size_t i = 0; i < moves.size(); ++i) s.moves.push_back(move_from_json(moves[i], path + "/moves/" + std::to_string(i)));
  return s;
}

inline RUWord word_from_json(const Json& j, const std::string& path = "") {
  EQForm a = form_from_json(detail::field(j, "ambient", path), path + "/ambient");
  RUWord w{a, subgroup_from_json(detail::field(j, "lagrangian", path), a.group(), path + "/lagrangian"), {}};
  const Json& gens = detail::array(detail::field(j, "generators", path), path + "/generators");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string p = path + "/generators/" + std::to_string(i);
    std::string type = type_of(gens[i], p);
    if (type == "keep") {
      w.generators.push_back(Keep{matrix_from_json(detail::field(gens[i], "f", p), p + "/f", a.dim(), a.dim())});
    } else if (type == "flip") {
      EQForm c = form_from_json(detail::field(gens[i], "complement", p), p + "/complement");
      w.generators.push_back(Flip{iso_from_json(detail::field(gens[i], "iso", p), p + "/iso"), c,
                                  subgroup_from_json(detail::field(gens[i], "lagrangian", p), c.group(), p + "/lagrangian")});
    } else {
      throw SchemaError(p + "/type", "unknown generator type '" + type + "'");
    }
  }
  return w;
}

// Compact canonical text: sorted keys, no whitespace.
inline std::string canonical(const Json& j) { return j.dump(); }

}  // namespace qform::json_io
