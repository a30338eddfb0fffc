#pragma once

#include "qform/forms.hpp"

#include <string>
#include <vector>

namespace qform {

// Basis e_1..e_k, f_1..f_k (columns of `basis`) with e spanning the lagrangian and
// lambda = [[0, I], [I, diag(d)]], d_i in {0, 1}.
struct MetabolicBasis {
  IntMatrix basis;
  std::vector<Int> d;

  std::size_t k() const { return d.size(); }
  Vector e(std::size_t i) const { return basis.col(i); }
  Vector f(std::size_t i) const { return basis.col(k() + i); }
  IntMatrix block_lambda() const {
    IntMatrix l(2 * k(), 2 * k());
    for (std::size_t i = 0; i < k(); ++i) {
      l(i, k() + i) = 1;
      l(k() + i, i) = 1;
      l(k() + i, k() + i) = d[i];
    }
    return l;
  }
};

namespace detail {

inline void require_free_nonsingular(const EQForm& e, const char* who) {
  if (!is_free(e)) throw HypothesisError("free form", std::string(who) + " needs a free form");
  if (!is_nonsingular(e)) throw HypothesisError("nonsingular form", std::string(who) + " needs a nonsingular form");
}

inline void require_free_lagrangian(const EQForm& e, const SubgroupRep& l, const char* who) {
  if (l.ambient() != e.group()) throw DimensionMismatch("lagrangian lives in another group");
  if (!is_free_lagrangian(e, l)) throw HypothesisError("free lagrangian", std::string(who) + ": subgroup is not a free lagrangian");
}

// Dual basis e of L against f, then f_{i} - sum_{j<i} lambda(fbar_j, f_i) e_j - floor(lambda(f_i, f_i)/2) e_i.
inline MetabolicBasis reduce_to_block(const EQForm& form, const std::vector<Vector>& lbasis, const std::vector<Vector>& f) {
  const std::size_t k = lbasis.size();
  if (f.size() != k) throw DimensionMismatch("complement basis has the wrong size");
  const std::size_t n = form.dim();
  IntMatrix a(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a(i, j) = form.pair(lbasis[i], f[j]);
  if (!is_unimodular(a)) throw HypothesisError("nonsingular pairing", "lagrangian and complement are not dual");
  IntMatrix e = (k ? IntMatrix::from_columns(lbasis, n) : IntMatrix(n, 0)) * unimodular_inverse(a).transpose();
  std::vector<Vector> fbar;
  MetabolicBasis mb;
  for (std::size_t i = 0; i < k; ++i) {
    Vector x = f[i];
    for (std::size_t j = 0; j < i; ++j) x = add(x, scale(-form.pair(fbar[j], f[i]), e.col(j)));
    x = add(x, scale(-floor_div(form.pair(f[i], f[i]), 2), e.col(i)));
    mb.d.push_back(form.pair(x, x));
    fbar.push_back(std::move(x));
  }
  mb.basis = k ? hstack(e, IntMatrix::from_columns(fbar, n)) : IntMatrix(n, 0);
  return mb;
}

}  // namespace detail

inline MetabolicBasis metabolic_basis(const EQForm& e, const SubgroupRep& l) {
  detail::require_free_nonsingular(e, "metabolic_basis");
  detail::require_free_lagrangian(e, l, "metabolic_basis");
  return detail::reduce_to_block(e, free_basis(l), free_basis(direct_complement(l)));
}

// The form in metabolic-basis coordinates; `basis` is then an isomorphism block -> e.
inline EQForm block_form(const EQForm& e, const MetabolicBasis& mb) {
  GroupHom h(e.group(), e.group(), mb.basis);
  return EQForm(e.group(), mb.block_lambda(), compose(e.mu(), h), e.v());
}

struct HyperbolicCheck {
  std::optional<FormIso> iso;  // form -> hyperbolic(k)
  std::string reason;          // set when refused
  explicit operator bool() const { return iso.has_value(); }
};

// Witness that e is hyperbolic, built on the supplied lagrangian.
inline HyperbolicCheck is_hyperbolic_with_witness(const EQForm& e, const SubgroupRep& l) {
  if (!is_free(e)) return {std::nullopt, "form is not free"};
  if (!is_nonsingular(e)) return {std::nullopt, "form is singular"};
  if (!is_even(e)) return {std::nullopt, "form is not even"};
  if (!e.mu().matrix().is_zero()) return {std::nullopt, "mu is not zero"};
  if (l.ambient() != e.group() || !is_free_lagrangian(e, l)) return {std::nullopt, "subgroup is not a free lagrangian"};
  MetabolicBasis mb = metabolic_basis(e, l);
  FormIso from_h(hyperbolic(mb.k(), e.target()).with_v(e.v()), e, mb.basis);
  return {from_h.inverse(), ""};
}

// J: e -> -e with J(e_i) = e_i, J(f_i) = d_i e_i - f_i in a metabolic basis.
inline FormIso neg_isomorphism(const EQForm& e, const SubgroupRep& l) {
  MetabolicBasis mb = metabolic_basis(e, l);
  const std::size_t k = mb.k();
  IntMatrix jb(2 * k, 2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    jb(i, i) = 1;
    jb(i, k + i) = mb.d[i];
    jb(k + i, k + i) = -1;
  }
  return FormIso(e, negate(e), mb.basis * jb * unimodular_inverse(mb.basis));
}

// I: e + e -> e + H_{2k}, carrying L + L onto L + ({0} x Z^k).
// I(e_i) = e_i + b_i, I(f_i) = f_i + d_i b_i, I(e'_i) = -b_i, I(f'_i) = f_i - a_i.
inline FormIso double_to_hyperbolic(const EQForm& e, const SubgroupRep& l) {
  MetabolicBasis mb = metabolic_basis(e, l);
  const std::size_t k = mb.k();
  IntMatrix ib(4 * k, 4 * k);
  for (std::size_t i = 0; i < k; ++i) {
    ib(i, i) = 1;
    ib(3 * k + i, i) = 1;
    ib(k + i, k + i) = 1;
    ib(3 * k + i, k + i) = mb.d[i];
    ib(3 * k + i, 2 * k + i) = -1;
    ib(k + i, 3 * k + i) = 1;
    ib(2 * k + i, 3 * k + i) = -1;
  }
  IntMatrix src = block_diagonal(mb.basis, mb.basis);
  IntMatrix dst = block_diagonal(mb.basis, IntMatrix::identity(2 * k));
  return FormIso(direct_sum(e, e), direct_sum(e, hyperbolic(k, e.target())), dst * ib * unimodular_inverse(src));
}

struct DiagonalLagrangians {
  EQForm ambient;          // source + (-target)
  SubgroupRep delta;       // {(x, I x)}
  EQForm ambient_star;     // source + (-(target*))
  SubgroupRep delta_star;  // {(x, -I x)}
};

inline DiagonalLagrangians diagonal_lagrangians(const FormIso& iso) {
  const EQForm& m = iso.source();
  const EQForm& n = iso.target();
  FormSum s1 = sum_forms(m, negate(n));
  FormSum s2 = sum_forms(m, negate(dual(n)));
  std::vector<Vector> g1, g2;
  for (std::size_t j = 0; j < m.dim(); ++j) {
    Vector x = m.group().generator(j);
    Vector ix = iso.apply(x);
    g1.push_back(add(s1.parts.embed1 * x, s1.parts.embed2 * ix));
    g2.push_back(add(s2.parts.embed1 * x, s2.parts.embed2 * scale(-1, ix)));
  }
  return {s1.form, SubgroupRep(s1.parts.group, g1), s2.form, SubgroupRep(s2.parts.group, g2)};
}

// L + ({0} x Z^k) inside e + H_{2k}.
inline SubgroupRep stabilized_lagrangian(const EQForm& e, const SubgroupRep& l, std::size_t k) {
  EQForm h = hyperbolic(k, e.target());
  std::vector<Vector> b;
  for (std::size_t i = 0; i < k; ++i) b.push_back(unit_vector(2 * k, k + i));
  return subgroup_sum(e, l, h, SubgroupRep(h.group(), b));
}

}  // namespace qform
