#pragma once

#include "qform/metabolic.hpp"

namespace qform {

// iso: source + H_{2k} -> target + H_{2l}, carrying L + ({0} x Z^k) onto L' + ({0} x Z^l).
struct StableLagrangianIso {
  std::size_t k = 0;
  std::size_t l = 0;
  FormIso iso;
};

inline StableLagrangianIso stable_lagrangian_iso(const EQForm& e, const SubgroupRep& l, const EQForm& e2,
                                                 const SubgroupRep& l2, MatchMode mode = MatchMode::Stable) {
  detail::require_free_nonsingular(e, "stable_lagrangian_iso");
  detail::require_free_nonsingular(e2, "stable_lagrangian_iso");
  if (e.target() != e2.target()) throw DimensionMismatch("forms take values in different target groups");
  if (!e.v() || !e2.v()) throw MissingV("stable_lagrangian_iso");
  if (*e.v() != *e2.v()) throw HypothesisError("common v", "forms carry different parity maps");
  if (!is_geometric(e) || !is_geometric(e2)) throw HypothesisError("geometric", "both forms must be geometric");
  if (!is_full(e) || !is_full(e2)) throw HypothesisError("full", "both forms must be full");
  detail::require_free_lagrangian(e, l, "stable_lagrangian_iso");
  detail::require_free_lagrangian(e2, l2, "stable_lagrangian_iso");

  const AbGroup& q = e.target();
  std::vector<Vector> n1 = free_basis(direct_complement(l));
  std::vector<Vector> n2 = free_basis(direct_complement(l2));
  auto restricted_mu = [&](const EQForm& f, const std::vector<Vector>& basis) {
    IntMatrix m(q.dim(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) m.set_col(i, f.mu_of(basis[i]));
    return GroupHom(AbGroup::free(basis.size()), q, m);
  };
  SurjectionMatch match = match_surjections(restricted_mu(e, n1), restricted_mu(e2, n2), mode);
  const std::size_t k = match.f_pad.dim(), kl = match.g_pad.dim();

  EQForm s1 = direct_sum(e, hyperbolic(k, q));
  EQForm s2 = direct_sum(e2, hyperbolic(kl, q));
  auto padded = [](const Vector& x, std::size_t extra) {
    Vector y = x;
    y.resize(x.size() + extra);
    return y;
  };
  // Bases of N + (Z^k x {0}) on both sides.
  std::vector<Vector> f1, f2;
  for (const auto& x : n1) f1.push_back(padded(x, 2 * k));
  for (std::size_t i = 0; i < k; ++i) f1.push_back(unit_vector(s1.dim(), e.dim() + i));
  for (const auto& x : n2) f2.push_back(padded(x, 2 * kl));
  for (std::size_t i = 0; i < kl; ++i) f2.push_back(unit_vector(s2.dim(), e2.dim() + i));
  std::vector<Vector> g2;
  const IntMatrix& h = match.h.matrix();
  for (std::size_t j = 0; j < f1.size(); ++j) {
    Vector x(s2.dim());
    for (std::size_t i = 0; i < f2.size(); ++i) x = add(x, scale(h(i, j), f2[i]));
    g2.push_back(std::move(x));
  }
  SubgroupRep lt1 = stabilized_lagrangian(e, l, k);
  SubgroupRep lt2 = stabilized_lagrangian(e2, l2, kl);
  MetabolicBasis b1 = detail::reduce_to_block(s1, free_basis(lt1), f1);
  MetabolicBasis b2 = detail::reduce_to_block(s2, free_basis(lt2), g2);
  if (b1.d != b2.d) throw Error("internal: parity vectors of the two metabolic bases differ");
  FormIso iso(s1, s2, b2.basis * unimodular_inverse(b1.basis));
  if (iso.apply(lt1) != lt2) throw Error("internal: stabilized lagrangians are not matched");
  return {k, kl, iso};
}

}  // namespace qform
