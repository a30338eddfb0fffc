#pragma once

#include "qform/metabolic.hpp"

#include <variant>
#include <vector>

namespace qform {

// Automorphism f of the ambient with f(L) = L.
struct Keep {
  IntMatrix f;
};

// I^{-1} (sigma + id) I for an isomorphism I: ambient -> H_2 + complement with
// I(L) = ({0} x Z) + lagrangian.
struct Flip {
  FormIso iso;
  EQForm complement;
  SubgroupRep lagrangian;
};

using RUGenerator = std::variant<Keep, Flip>;

struct RUWord {
  EQForm ambient;
  SubgroupRep lagrangian;
  std::vector<RUGenerator> generators;  // evaluated as g_1 g_2 ... g_n
};

class GeneratorError : public ValidationError {
 public:
  GeneratorError(std::size_t index, const std::string& why)
      : ValidationError("generator " + std::to_string(index) + ": " + why), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

inline IntMatrix permutation_matrix(const std::vector<std::size_t>& image_of) {
  const std::size_t n = image_of.size();
  IntMatrix p(n, n);
  for (std::size_t j = 0; j < n; ++j) p(image_of[j], j) = 1;
  return p;
}

// ({0} x Z) + lagrangian inside H_2 + complement.
inline SubgroupRep flip_split(const EQForm& complement, const SubgroupRep& lagrangian, bool b_side = true) {
  EQForm h = hyperbolic(1, complement.target());
  SubgroupRep line(h.group(), {b_side ? unit_vector(2, 1) : unit_vector(2, 0)});
  return subgroup_sum(h, line, complement, lagrangian);
}

inline std::optional<std::string> check_generator(const EQForm& m, const SubgroupRep& l, const RUGenerator& g) {
  if (const Keep* keep = std::get_if<Keep>(&g)) {
    if (auto why = FormIso::check(m, m, keep->f)) return "Keep is not an automorphism: " + *why;
    if (image(GroupHom(m.group(), m.group(), keep->f), l) != l) return "Keep does not preserve the lagrangian";
    return std::nullopt;
  }
  const Flip& flip = std::get<Flip>(g);
  if (flip.iso.source() != m) return "Flip isomorphism has the wrong source";
  if (flip.iso.target() != direct_sum(hyperbolic(1, m.target()), flip.complement))
    return "Flip isomorphism does not land in H_2 + complement";
  if (!is_free_lagrangian(flip.complement, flip.lagrangian)) return "Flip lagrangian is not a free lagrangian";
  if (flip.iso.apply(l) != flip_split(flip.complement, flip.lagrangian)) return "Flip does not split the lagrangian";
  return std::nullopt;
}

inline IntMatrix generator_matrix(const RUGenerator& g) {
  if (const Keep* keep = std::get_if<Keep>(&g)) return keep->f;
  const Flip& flip = std::get<Flip>(g);
  const std::size_t n = flip.iso.target().dim();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[0], perm[1]);
  return flip.iso.inverse().matrix() * permutation_matrix(perm) * flip.iso.matrix();
}

inline IntMatrix ru_word_eval(const RUWord& w) {
  IntMatrix acc = IntMatrix::identity(w.ambient.dim());
  for (std::size_t i = 0; i < w.generators.size(); ++i) {
    if (auto why = check_generator(w.ambient, w.lagrangian, w.generators[i])) throw GeneratorError(i, *why);
    acc = acc * generator_matrix(w.generators[i]);
  }
  return acc;
}

inline RUGenerator inverse_generator(const RUGenerator& g) {
  if (const Keep* keep = std::get_if<Keep>(&g)) return Keep{unimodular_inverse(keep->f)};
  return g;  // flips are involutions
}

// Generator on B transported to A along t: A -> B.
inline RUGenerator transport(const RUGenerator& g, const FormIso& t) {
  if (const Keep* keep = std::get_if<Keep>(&g)) return Keep{t.inverse().matrix() * keep->f * t.matrix()};
  const Flip& flip = std::get<Flip>(g);
  return Flip{compose(flip.iso, t), flip.complement, flip.lagrangian};
}

// Generator on `ambient` extended by the identity on a right summand c.
inline RUGenerator lift_right(const RUGenerator& g, const EQForm& ambient, const EQForm& c, const SubgroupRep& lc) {
  if (const Keep* keep = std::get_if<Keep>(&g))
    return Keep{iso_sum(FormIso(ambient, ambient, keep->f), FormIso::identity(c)).matrix()};
  const Flip& flip = std::get<Flip>(g);
  FormIso s = iso_sum(flip.iso, FormIso::identity(c));
  EQForm comp = direct_sum(flip.complement, c);
  return Flip{FormIso(s.source(), direct_sum(hyperbolic(1, c.target()), comp), s.matrix()), comp,
              subgroup_sum(flip.complement, flip.lagrangian, c, lc)};
}

// Generator on `ambient` extended by the identity on a left summand c.
inline RUGenerator lift_left(const EQForm& c, const SubgroupRep& lc, const RUGenerator& g, const EQForm& ambient) {
  if (const Keep* keep = std::get_if<Keep>(&g))
    return Keep{iso_sum(FormIso::identity(c), FormIso(ambient, ambient, keep->f)).matrix()};
  const Flip& flip = std::get<Flip>(g);
  FormIso s = iso_sum(FormIso::identity(c), flip.iso);
  // c + H_2 + M'  ->  H_2 + c + M'
  const std::size_t nc = c.dim(), n = s.target().dim();
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < n; ++j) perm[j] = j < nc ? j + 2 : (j < nc + 2 ? j - nc : j);
  EQForm comp = direct_sum(c, flip.complement);
  FormIso moved(s.source(), direct_sum(hyperbolic(1, c.target()), comp), permutation_matrix(perm) * s.matrix());
  return Flip{moved, comp, subgroup_sum(c, lc, flip.complement, flip.lagrangian)};
}

// Flip exchanging a_i and b_i of the H_{2k} summand in e + H_{2k}, lagrangian L + ({0} x Z^k).
inline Flip hyperbolic_factor_flip(const EQForm& e, const SubgroupRep& l, std::size_t k, std::size_t i) {
  EQForm t = direct_sum(e, hyperbolic(k, e.target()));
  EQForm comp = direct_sum(e, hyperbolic(k - 1, e.target()));
  const std::size_t n = e.dim();
  std::vector<std::size_t> perm(t.dim());
  for (std::size_t j = 0; j < n; ++j) perm[j] = 2 + j;
  std::size_t next_a = 2 + n, next_b = 2 + n + (k - 1);
  for (std::size_t j = 0; j < k; ++j) {
    if (j == i) {
      perm[n + j] = 0;
      perm[n + k + j] = 1;
    } else {
      perm[n + j] = next_a++;
      perm[n + k + j] = next_b++;
    }
  }
  return Flip{FormIso(t, direct_sum(hyperbolic(1, e.target()), comp), permutation_matrix(perm)), comp,
              stabilized_lagrangian(e, l, k - 1)};
}

struct RUWallWitness {
  RUWord word;         // on e + e + (-e) with L + L + L
  IntMatrix expected;  // phi + phi^{-1} + id
};

inline RUWallWitness ru_wall_witness(const EQForm& e, const SubgroupRep& l, const FormIso& phi) {
  if (phi.source() != e || phi.target() != e) throw HypothesisError("automorphism", "phi must be an automorphism of the form");
  MetabolicBasis mb = metabolic_basis(e, l);
  const std::size_t k = mb.k(), n = e.dim();
  const EQForm ne = negate(e);

  // F: e + (-e) -> e + H_{2k}, F = D o (J^{-1} + id) o swap.
  FormIso d = double_to_hyperbolic(e, l);
  FormIso j = neg_isomorphism(e, l);
  EQForm a1 = direct_sum(e, ne);
  std::vector<std::size_t> swap_perm(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) swap_perm[i] = i < n ? i + n : i - n;
  FormIso swap(a1, direct_sum(ne, e), permutation_matrix(swap_perm));
  FormIso f = compose(d, compose(iso_sum(j.inverse(), FormIso::identity(e)), swap));

  const EQForm& t = d.target();
  SubgroupRep l0 = stabilized_lagrangian(e, l, k);
  std::vector<std::size_t> psi_perm(t.dim());
  for (std::size_t i = 0; i < t.dim(); ++i) psi_perm[i] = i < n ? i : (i < n + k ? i + k : i - k);
  IntMatrix psi = permutation_matrix(psi_perm);

  FormIso phi2 = iso_sum(phi, FormIso(ne, ne, phi.matrix()));
  IntMatrix g = f.matrix() * phi2.matrix() * f.inverse().matrix();
  IntMatrix keep_t = psi * g * psi;

  std::vector<RUGenerator> w1;
  for (std::size_t i = 0; i < k; ++i) w1.push_back(transport(hyperbolic_factor_flip(e, l, k, i), f));
  w1.push_back(transport(Keep{keep_t}, f));
  for (std::size_t i = 0; i < k; ++i) w1.push_back(transport(hyperbolic_factor_flip(e, l, k, i), f));

  SubgroupRep l1 = subgroup_sum(e, l, ne, l);
  if (ru_word_eval(RUWord{a1, l1, w1}) != phi2.matrix()) throw Error("internal: diagonal word does not evaluate to phi + phi");

  EQForm a3 = direct_sum(e, a1);
  SubgroupRep l3 = subgroup_sum(e, l, a1, l1);
  // T_Y: (x1, x2, x3) -> ((x1, x3), x2)
  std::vector<std::size_t> ty_perm(3 * n);
  for (std::size_t i = 0; i < 3 * n; ++i) ty_perm[i] = i < n ? i : (i < 2 * n ? i + n : i - n);
  FormIso ty(a3, direct_sum(a1, e), permutation_matrix(ty_perm));

  RUWord word{a3, l3, {}};
  for (const auto& gen : w1) word.generators.push_back(transport(lift_right(gen, a1, e, l), ty));
  for (auto it = w1.rbegin(); it != w1.rend(); ++it)
    word.generators.push_back(inverse_generator(lift_left(e, l, *it, a1)));

  IntMatrix expected =
      block_diagonal(block_diagonal(phi.matrix(), unimodular_inverse(phi.matrix())), IntMatrix::identity(n));
  if (ru_word_eval(word) != expected) throw Error("internal: wall word does not evaluate to phi + phi^-1 + id");
  return {word, expected};
}

}  // namespace qform
