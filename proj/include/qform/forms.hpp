#pragma once

#include "qform/abelian.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qform {

inline AbGroup z2_group() { return AbGroup(0, {2}); }

// Parity map Q -> Z/2 from one bit per generator of Q.
inline GroupHom parity_map(const AbGroup& q, const std::vector<int>& bits) {
  if (bits.size() != q.dim()) throw DimensionMismatch("v needs one bit per generator of the target group");
  IntMatrix m(1, q.dim());
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] != 0 && bits[j] != 1) throw ValidationError("v entries must be 0 or 1");
    m(0, j) = bits[j];
  }
  return GroupHom(q, z2_group(), m);
}

// Extended quadratic form (M, lambda, mu) over a target group Q, optionally with v: Q -> Z/2.
class EQForm {
 public:
  EQForm() = default;
  EQForm(AbGroup group, IntMatrix lambda, GroupHom mu, std::optional<GroupHom> v = std::nullopt)
      : group_(std::move(group)), lambda_(std::move(lambda)), mu_(std::move(mu)), v_(std::move(v)) {
    const std::size_t n = group_.dim();
    if (lambda_.rows() != n || lambda_.cols() != n)
      throw DimensionMismatch("lambda must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!lambda_.is_symmetric()) throw ValidationError("lambda is not symmetric");
    for (std::size_t i = group_.free_rank(); i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (lambda_(i, j) != 0) throw ValidationError("lambda is nonzero on torsion generator " + std::to_string(i));
    if (mu_.source() != group_) throw DimensionMismatch("mu is not defined on the form's group");
    if (v_) {
      if (v_->source() != mu_.target()) throw DimensionMismatch("v is not defined on the target group");
      if (v_->target() != z2_group()) throw DimensionMismatch("v must take values in Z/2");
    }
  }

  const AbGroup& group() const { return group_; }
  const AbGroup& target() const { return mu_.target(); }
  const IntMatrix& lambda() const { return lambda_; }
  const GroupHom& mu() const { return mu_; }
  const std::optional<GroupHom>& v() const { return v_; }
  std::size_t rank() const { return group_.free_rank(); }
  std::size_t dim() const { return group_.dim(); }

  IntMatrix lambda_free() const { return lambda_.block(0, 0, rank(), rank()); }
  Int pair(const Vector& x, const Vector& y) const { return bilinear(lambda_, x, y); }
  Vector mu_of(const Vector& x) const { return mu_.apply(x); }
  int v_of(const Vector& q) const {
    if (!v_) throw MissingV("parity of a target element");
    return v_->apply(q)[0] == 0 ? 0 : 1;
  }

  EQForm with_v(std::optional<GroupHom> v) const { return EQForm(group_, lambda_, mu_, std::move(v)); }

  friend bool operator==(const EQForm& a, const EQForm& b) {
    return a.group_ == b.group_ && a.lambda_ == b.lambda_ && a.mu_ == b.mu_ && a.v_ == b.v_;
  }
  friend bool operator!=(const EQForm& a, const EQForm& b) { return !(a == b); }

 private:
  AbGroup group_;
  IntMatrix lambda_;
  GroupHom mu_;
  std::optional<GroupHom> v_;
};

// Hyperbolic form on Z^{2k}, basis a_1..a_k, b_1..b_k with lambda(a_i, b_j) = delta_ij, mu = 0.
inline EQForm hyperbolic(std::size_t k, const AbGroup& q = AbGroup()) {
  IntMatrix l(2 * k, 2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    l(i, k + i) = 1;
    l(k + i, i) = 1;
  }
  return EQForm(AbGroup::free(2 * k), l, GroupHom::zero(AbGroup::free(2 * k), q));
}

// (Z^2, [[0,1],[1,0]], [a, b]) over Z.
inline EQForm e_ab(const Int& a, const Int& b) {
  return EQForm(AbGroup::free(2), IntMatrix{{0, 1}, {1, 0}}, GroupHom(AbGroup::free(2), AbGroup::free(1), IntMatrix{{a, b}}));
}

namespace detail {

inline std::optional<GroupHom> merge_v(const std::optional<GroupHom>& a, const std::optional<GroupHom>& b) {
  if (a && b && *a != *b) throw HypothesisError("common v", "summands carry different parity maps");
  return a ? a : b;
}

}  // namespace detail

struct FormSum {
  EQForm form;
  GroupSum parts;
};

inline FormSum sum_forms(const EQForm& a, const EQForm& b) {
  if (a.target() != b.target()) throw DimensionMismatch("direct sum of forms over different target groups");
  GroupSum s = sum_groups(a.group(), b.group());
  IntMatrix l = s.project1.transpose() * a.lambda() * s.project1 + s.project2.transpose() * b.lambda() * s.project2;
  IntMatrix m = a.mu().matrix() * s.project1 + b.mu().matrix() * s.project2;
  EQForm f(s.group, l, GroupHom(s.group, a.target(), m), detail::merge_v(a.v(), b.v()));
  return {f, s};
}

inline EQForm direct_sum(const EQForm& a, const EQForm& b) { return sum_forms(a, b).form; }

inline EQForm negate(const EQForm& e) {
  return EQForm(e.group(), -e.lambda(), GroupHom(e.group(), e.target(), -e.mu().matrix()), e.v());
}

// (M, lambda, -mu)
inline EQForm dual(const EQForm& e) {
  return EQForm(e.group(), e.lambda(), GroupHom(e.group(), e.target(), -e.mu().matrix()), e.v());
}

// Pull back along h: N -> M.
inline EQForm pullback(const GroupHom& h, const EQForm& e) {
  if (h.target() != e.group()) throw DimensionMismatch("pullback along a map into another group");
  return EQForm(h.source(), h.matrix().transpose() * e.lambda() * h.matrix(), compose(e.mu(), h), e.v());
}

struct Restriction {
  EQForm form;
  GroupHom inclusion;
};

inline Restriction restrict_form(const EQForm& e, const SubgroupRep& s) {
  if (s.ambient() != e.group()) throw DimensionMismatch("subgroup of another group");
  SubgroupPresentation p = present(s);
  return {pullback(p.inclusion, e), p.inclusion};
}

inline bool is_free(const EQForm& e) { return e.group().is_free(); }
inline bool is_nonsingular(const EQForm& e) {
  Int d = e.lambda_free().determinant();
  return d == 1 || d == -1;
}
inline bool is_even(const EQForm& e) {
  for (std::size_t i = 0; i < e.rank(); ++i)
    if (e.lambda()(i, i) % 2 != 0) return false;
  return true;
}
inline bool is_full(const EQForm& e) { return is_surjective(e.mu()); }
// rho_2 lambda(x, x) == v mu(x); additive in x, so generators suffice.
inline bool is_geometric(const EQForm& e) {
  if (!e.v()) throw MissingV("geometric check");
  for (std::size_t i = 0; i < e.dim(); ++i) {
    int l = e.lambda()(i, i) % 2 == 0 ? 0 : 1;
    if (l != e.v_of(e.mu_of(e.group().generator(i)))) return false;
  }
  return true;
}

struct FormReport {
  bool free = false;
  bool nonsingular = false;
  bool even = false;
  bool full = false;
  std::optional<bool> geometric;  // empty when v is missing
  std::size_t rank = 0;
};

inline FormReport form_validate(const EQForm& e) {
  FormReport r;
  r.free = is_free(e);
  r.nonsingular = is_nonsingular(e);
  r.even = is_even(e);
  r.full = is_full(e);
  if (e.v()) r.geometric = is_geometric(e);
  r.rank = e.rank();
  return r;
}

inline SubgroupRep orthogonal_complement(const EQForm& e, const SubgroupRep& x) {
  if (x.ambient() != e.group()) throw DimensionMismatch("subgroup of another group");
  std::vector<Vector> gens = x.generators();
  IntMatrix a(gens.size(), e.dim());
  for (std::size_t i = 0; i < gens.size(); ++i) a.set_row(i, e.lambda() * gens[i]);
  IntMatrix k = right_kernel(a);
  return SubgroupRep(e.group(), k.col_list());
}

struct SubgroupFlags {
  bool isotropic = false;
  bool mu_vanishes = false;
  bool half_rank_summand = false;
  bool free_lagrangian = false;
  bool t_lagrangian = false;
};

inline bool is_isotropic(const EQForm& e, const SubgroupRep& s) {
  auto g = s.generators();
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i; j < g.size(); ++j)
      if (e.pair(g[i], g[j]) != 0) return false;
  return true;
}

inline bool mu_vanishes_on(const EQForm& e, const SubgroupRep& s) {
  for (const auto& g : s.generators())
    if (!e.target().is_zero(e.mu_of(g))) return false;
  return true;
}

inline SubgroupFlags subgroup_classify(const EQForm& e, const SubgroupRep& s) {
  if (s.ambient() != e.group()) throw DimensionMismatch("subgroup of another group");
  SubgroupFlags f;
  f.isotropic = is_isotropic(e, s);
  f.mu_vanishes = mu_vanishes_on(e, s);
  f.half_rank_summand = 2 * s.rank() == e.rank() && is_direct_summand(s);
  bool meets_torsion_trivially = intersect(s, SubgroupRep::torsion(e.group())).is_zero();
  bool base = f.isotropic && f.mu_vanishes && f.half_rank_summand;
  f.free_lagrangian = base && meets_torsion_trivially;
  f.t_lagrangian = base && s.contains_torsion();
  return f;
}

inline bool is_free_lagrangian(const EQForm& e, const SubgroupRep& s) { return subgroup_classify(e, s).free_lagrangian; }
inline bool is_t_lagrangian(const EQForm& e, const SubgroupRep& s) { return subgroup_classify(e, s).t_lagrangian; }

// Isomorphism of forms; the matrix maps source coordinates to target coordinates.
class FormIso {
 public:
  FormIso() = default;
  FormIso(EQForm source, EQForm target, IntMatrix matrix)
      : source_(std::move(source)), target_(std::move(target)) {
    if (auto why = check(source_, target_, matrix)) throw ValidationError("not a form isomorphism: " + *why);
    hom_ = GroupHom(source_.group(), target_.group(), std::move(matrix));
  }

  // Reason the matrix fails to be a form isomorphism, or nullopt.
  static std::optional<std::string> check(const EQForm& s, const EQForm& t, const IntMatrix& m) {
    if (m.rows() != t.dim() || m.cols() != s.dim()) return "matrix shape does not match the groups";
    if (s.target() != t.target()) return "forms take values in different target groups";
    GroupHom h;
    try {
      h = GroupHom(s.group(), t.group(), m);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    if (m.transpose() * t.lambda() * m != s.lambda()) return "lambda is not preserved";
    if (compose(t.mu(), h) != s.mu()) return "mu is not preserved";
    if (!is_isomorphism(h)) return "underlying homomorphism is not bijective";
    return std::nullopt;
  }

  static FormIso identity(const EQForm& e) { return FormIso(e, e, IntMatrix::identity(e.dim())); }

  const EQForm& source() const { return source_; }
  const EQForm& target() const { return target_; }
  const IntMatrix& matrix() const { return hom_.matrix(); }
  const GroupHom& hom() const { return hom_; }

  Vector apply(const Vector& x) const { return hom_.apply(x); }
  SubgroupRep apply(const SubgroupRep& s) const { return image(hom_, s); }
  FormIso inverse() const { return FormIso(target_, source_, qform::inverse(hom_).matrix()); }

 private:
  EQForm source_;
  EQForm target_;
  GroupHom hom_;
};

// second o first
inline FormIso compose(const FormIso& second, const FormIso& first) {
  if (first.target() != second.source()) throw DimensionMismatch("composition of incompatible isomorphisms");
  return FormIso(first.source(), second.target(), second.matrix() * first.matrix());
}

inline FormIso iso_sum(const FormIso& a, const FormIso& b) {
  FormSum s = sum_forms(a.source(), b.source());
  FormSum t = sum_forms(a.target(), b.target());
  IntMatrix m = t.parts.embed1 * a.matrix() * s.parts.project1 + t.parts.embed2 * b.matrix() * s.parts.project2;
  return FormIso(s.form, t.form, m);
}

// a + b -> b + a
inline FormIso swap_iso(const EQForm& a, const EQForm& b) {
  FormSum s = sum_forms(a, b);
  FormSum t = sum_forms(b, a);
  return FormIso(s.form, t.form, t.parts.embed2 * s.parts.project1 + t.parts.embed1 * s.parts.project2);
}

// S1 + S2 inside the direct sum described by `parts`.
inline SubgroupRep subgroup_sum(const GroupSum& parts, const SubgroupRep& a, const SubgroupRep& b) {
  std::vector<Vector> gens;
  for (const auto& g : a.generators()) gens.push_back(parts.embed1 * g);
  for (const auto& g : b.generators()) gens.push_back(parts.embed2 * g);
  return SubgroupRep(parts.group, gens);
}

inline SubgroupRep subgroup_sum(const EQForm& a, const SubgroupRep& sa, const EQForm& b, const SubgroupRep& sb) {
  return subgroup_sum(sum_forms(a, b).parts, sa, sb);
}

}  // namespace qform
