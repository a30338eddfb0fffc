#pragma once

#include "qform/error.hpp"
#include "qform/matrix.hpp"
#include "qform/normal_form.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace qform {

// Finitely generated abelian group Z^r + Z/d_1 + ... + Z/d_m in invariant-factor form
// (d_i >= 2, d_i | d_{i+1}). Elements are vectors of length r + m, free coordinates first,
// torsion coordinates reduced into [0, d_i).
class AbGroup {
 public:
  AbGroup() = default;
  AbGroup(std::size_t free_rank, std::vector<Int> torsion) : free_rank_(free_rank), torsion_(std::move(torsion)) {
    for (std::size_t i = 0; i < torsion_.size(); ++i) {
      if (torsion_[i] < 2) throw ValidationError("invariant factor must be at least 2, got " + torsion_[i].str());
      if (i > 0 && torsion_[i] % torsion_[i - 1] != 0)
        throw ValidationError("invariant factors must form a divisibility chain");
    }
  }
  static AbGroup free(std::size_t r) { return AbGroup(r, {}); }

  std::size_t free_rank() const { return free_rank_; }
  std::size_t torsion_count() const { return torsion_.size(); }
  std::size_t dim() const { return free_rank_ + torsion_.size(); }
  const std::vector<Int>& torsion() const { return torsion_; }
  bool is_free() const { return torsion_.empty(); }
  bool is_trivial() const { return dim() == 0; }
  // 0 for a free generator.
  Int order(std::size_t i) const { return i < free_rank_ ? Int(0) : torsion_[i - free_rank_]; }

  Vector zero() const { return Vector(dim()); }
  Vector generator(std::size_t i) const { return unit_vector(dim(), i); }

  Vector reduce(Vector x) const {
    check(x);
    for (std::size_t i = 0; i < torsion_.size(); ++i) x[free_rank_ + i] = mod_floor(x[free_rank_ + i], torsion_[i]);
    return x;
  }
  bool is_zero(const Vector& x) const {
    Vector r = reduce(x);
    return std::all_of(r.begin(), r.end(), [](const Int& v) { return v == 0; });
  }
  bool equal(const Vector& x, const Vector& y) const { return reduce(x) == reduce(y); }
  void check(const Vector& x) const {
    if (x.size() != dim())
      throw DimensionMismatch("element has " + std::to_string(x.size()) + " coordinates, group needs " +
                              std::to_string(dim()));
  }

  // Rows d_i * e_{r+i}; their span is the kernel of Z^dim -> this group.
  IntMatrix relation_rows() const {
    IntMatrix m(torsion_.size(), dim());
    for (std::size_t i = 0; i < torsion_.size(); ++i) m(i, free_rank_ + i) = torsion_[i];
    return m;
  }

  std::string describe() const {
    std::string s;
    if (free_rank_ > 0) s = free_rank_ == 1 ? "Z" : "Z^" + std::to_string(free_rank_);
    for (const auto& d : torsion_) s += (s.empty() ? "" : "+") + ("Z/" + d.str());
    return s.empty() ? "0" : s;
  }

  friend bool operator==(const AbGroup& a, const AbGroup& b) {
    return a.free_rank_ == b.free_rank_ && a.torsion_ == b.torsion_;
  }
  friend bool operator!=(const AbGroup& a, const AbGroup& b) { return !(a == b); }

 private:
  std::size_t free_rank_ = 0;
  std::vector<Int> torsion_;
};

inline AbGroup cyclic_group(const Int& d) { return d == 0 ? AbGroup::free(1) : AbGroup(0, {d}); }

// Z^n modulo the row lattice of `relations`, in invariant-factor form.
// projection: Z^n -> group coordinates; section: group generators -> Z^n lifts.
struct QuotientPresentation {
  AbGroup group;
  IntMatrix projection;
  IntMatrix section;
};

inline QuotientPresentation present_quotient(std::size_t n, const IntMatrix& relations) {
  if (relations.cols() != n && relations.rows() != 0) throw DimensionMismatch("relation width mismatch");
  IntMatrix cc = relations.rows() == 0 ? IntMatrix(n, 0) : relations.transpose();
  SmithForm s = smith_normal_form(cc);
  std::vector<std::size_t> free_idx, tors_idx;
  std::vector<Int> factors;
  for (std::size_t i = 0; i < n; ++i) {
    Int d = i < s.rank ? s.D(i, i) : Int(0);
    if (d == 0)
      free_idx.push_back(i);
    else if (d != 1) {
      tors_idx.push_back(i);
      factors.push_back(d);
    }
  }
  std::vector<std::size_t> order = free_idx;
  order.insert(order.end(), tors_idx.begin(), tors_idx.end());
  AbGroup g(free_idx.size(), factors);
  IntMatrix proj = s.U.select_rows(order);
  for (std::size_t i = 0; i < tors_idx.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) proj(free_idx.size() + i, j) = mod_floor(proj(free_idx.size() + i, j), factors[i]);
  IntMatrix sec = unimodular_inverse(s.U).select_cols(order);
  return {g, proj, sec};
}

inline AbGroup group_from_relations(std::size_t n, const IntMatrix& relations) {
  return present_quotient(n, relations).group;
}

// Homomorphism given by a matrix whose column j is the image of generator j.
class GroupHom {
 public:
  GroupHom() = default;
  GroupHom(AbGroup source, AbGroup target, IntMatrix matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
      throw DimensionMismatch("homomorphism matrix is " + std::to_string(matrix_.rows()) + "x" +
                              std::to_string(matrix_.cols()) + ", expected " + std::to_string(target_.dim()) + "x" +
                              std::to_string(source_.dim()));
    for (std::size_t j = 0; j < matrix_.cols(); ++j) matrix_.set_col(j, target_.reduce(matrix_.col(j)));
    for (std::size_t j = source_.free_rank(); j < source_.dim(); ++j) {
      if (!target_.is_zero(scale(source_.order(j), matrix_.col(j))))
        throw ValidationError("homomorphism not well defined: generator " + std::to_string(j) + " of order " +
                              source_.order(j).str() + " maps to an element of other order");
    }
  }
  static GroupHom identity(const AbGroup& g) { return GroupHom(g, g, IntMatrix::identity(g.dim())); }
  static GroupHom zero(const AbGroup& s, const AbGroup& t) { return GroupHom(s, t, IntMatrix(t.dim(), s.dim())); }

  const AbGroup& source() const { return source_; }
  const AbGroup& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  Vector apply(const Vector& x) const {
    source_.check(x);
    return target_.reduce(matrix_ * x);
  }

  friend bool operator==(const GroupHom& a, const GroupHom& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.matrix_ == b.matrix_;
  }
  friend bool operator!=(const GroupHom& a, const GroupHom& b) { return !(a == b); }

 private:
  AbGroup source_;
  AbGroup target_;
  IntMatrix matrix_;
};

// second o first
inline GroupHom compose(const GroupHom& second, const GroupHom& first) {
  if (first.target() != second.source()) throw DimensionMismatch("composition of incompatible homomorphisms");
  return GroupHom(first.source(), second.target(), second.matrix() * first.matrix());
}

namespace detail {

// Coefficients c with c * basis == x, for a Hermite basis (rows in echelon form).
inline std::optional<Vector> lattice_coefficients(const IntMatrix& basis, Vector x) {
  Vector c(basis.rows());
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    std::size_t p = 0;
    while (basis(i, p) == 0) ++p;
    if (x[p] % basis(i, p) != 0) return std::nullopt;
    c[i] = x[p] / basis(i, p);
    if (c[i] != 0)
      for (std::size_t j = p; j < x.size(); ++j) x[j] -= c[i] * basis(i, j);
  }
  for (const auto& v : x)
    if (v != 0) return std::nullopt;
  return c;
}

}  // namespace detail

// Subgroup of an AbGroup. Stored canonically as the row Hermite basis of its preimage in Z^n
// (which contains the torsion relations), so equal subgroups have equal representations.
class SubgroupRep {
 public:
  SubgroupRep() = default;
  SubgroupRep(AbGroup ambient, const std::vector<Vector>& generators) : ambient_(std::move(ambient)) {
    IntMatrix rel = ambient_.relation_rows();
    IntMatrix rows(generators.size() + rel.rows(), ambient_.dim());
    for (std::size_t i = 0; i < generators.size(); ++i) {
      ambient_.check(generators[i]);
      rows.set_row(i, generators[i]);
    }
    rows.set_block(generators.size(), 0, rel);
    basis_ = hermite_basis(rows);
  }
  static SubgroupRep whole(const AbGroup& g) {
    std::vector<Vector> gens;
    for (std::size_t i = 0; i < g.dim(); ++i) gens.push_back(g.generator(i));
    return SubgroupRep(g, gens);
  }
  static SubgroupRep zero(const AbGroup& g) { return SubgroupRep(g, {}); }
  static SubgroupRep torsion(const AbGroup& g) {
    std::vector<Vector> gens;
    for (std::size_t i = g.free_rank(); i < g.dim(); ++i) gens.push_back(g.generator(i));
    return SubgroupRep(g, gens);
  }

  const AbGroup& ambient() const { return ambient_; }
  // Hermite basis of the preimage lattice in Z^n.
  const IntMatrix& lattice_basis() const { return basis_; }

  // Canonical generators: lattice basis rows reduced in the ambient group, zeros dropped.
  std::vector<Vector> generators() const {
    std::vector<Vector> out;
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
      Vector r = ambient_.reduce(basis_.row(i));
      if (!ambient_.is_zero(r)) out.push_back(r);
    }
    return out;
  }

  bool contains(const Vector& x) const {
    ambient_.check(x);
    return detail::lattice_coefficients(basis_, x).has_value();
  }
  bool contains(const SubgroupRep& other) const {
    for (std::size_t i = 0; i < other.basis_.rows(); ++i)
      if (!contains(other.basis_.row(i))) return false;
    return true;
  }
  std::size_t rank() const { return basis_.rows() - ambient_.torsion_count(); }
  bool is_zero() const { return generators().empty(); }
  bool contains_torsion() const { return contains(torsion(ambient_)); }

  friend bool operator==(const SubgroupRep& a, const SubgroupRep& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const SubgroupRep& a, const SubgroupRep& b) { return !(a == b); }

 private:
  AbGroup ambient_;
  IntMatrix basis_;
};

inline SubgroupRep operator+(const SubgroupRep& a, const SubgroupRep& b) {
  if (a.ambient() != b.ambient()) throw DimensionMismatch("sum of subgroups of different groups");
  std::vector<Vector> gens = a.lattice_basis().row_list();
  for (const auto& r : b.lattice_basis().row_list()) gens.push_back(r);
  return SubgroupRep(a.ambient(), gens);
}

inline SubgroupRep intersect(const SubgroupRep& a, const SubgroupRep& b) {
  if (a.ambient() != b.ambient()) throw DimensionMismatch("intersection of subgroups of different groups");
  const IntMatrix& ba = a.lattice_basis();
  const IntMatrix& bb = b.lattice_basis();
  IntMatrix k = left_kernel(vstack(ba, -bb));
  std::vector<Vector> gens;
  for (std::size_t i = 0; i < k.rows(); ++i) {
    Vector y = k.row(i);
    Vector ya(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(ba.rows()));
    gens.push_back(ba.transpose() * ya);
  }
  return SubgroupRep(a.ambient(), gens);
}

// An abstract group isomorphic to a subgroup, with the inclusion.
struct SubgroupPresentation {
  AbGroup group;
  GroupHom inclusion;
  IntMatrix coordinates;  // lattice coefficients -> group coordinates
};

inline SubgroupPresentation present(const SubgroupRep& s) {
  const IntMatrix& b = s.lattice_basis();
  IntMatrix rel = s.ambient().relation_rows();
  IntMatrix coeff(rel.rows(), b.rows());
  for (std::size_t i = 0; i < rel.rows(); ++i) coeff.set_row(i, *detail::lattice_coefficients(b, rel.row(i)));
  QuotientPresentation q = present_quotient(b.rows(), coeff);
  GroupHom inc(q.group, s.ambient(), b.transpose() * q.section);
  return {q.group, inc, q.projection};
}

// Coordinates of x in the presentation group of s (x must lie in s).
inline Vector subgroup_coordinates(const SubgroupRep& s, const SubgroupPresentation& p, const Vector& x) {
  auto c = detail::lattice_coefficients(s.lattice_basis(), x);
  if (!c) throw HypothesisError("element in subgroup", to_string(x) + " is not in the subgroup");
  return p.group.reduce(p.coordinates * *c);
}

// A basis of a subgroup that meets the torsion trivially.
inline std::vector<Vector> free_basis(const SubgroupRep& s) {
  SubgroupPresentation p = present(s);
  if (!p.group.is_free()) throw HypothesisError("free subgroup", "subgroup has torsion " + p.group.describe());
  return p.inclusion.matrix().col_list();
}

inline bool is_free_subgroup(const SubgroupRep& s) { return present(s).group.is_free(); }

inline SubgroupRep image(const GroupHom& h, const SubgroupRep& s) {
  if (s.ambient() != h.source()) throw DimensionMismatch("image of subgroup of another group");
  std::vector<Vector> gens;
  for (const auto& g : s.generators()) gens.push_back(h.apply(g));
  return SubgroupRep(h.target(), gens);
}

inline SubgroupRep image(const GroupHom& h) { return image(h, SubgroupRep::whole(h.source())); }

namespace detail {

// Columns d_j * e_{r+j}: the target relations as columns.
inline IntMatrix relation_columns(const AbGroup& g) { return g.relation_rows().transpose(); }

}  // namespace detail

inline SubgroupRep kernel(const GroupHom& h) {
  const std::size_t n = h.source().dim();
  IntMatrix k = right_kernel(hstack(h.matrix(), detail::relation_columns(h.target())));
  std::vector<Vector> gens;
  for (std::size_t j = 0; j < k.cols(); ++j) {
    Vector c = k.col(j);
    gens.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n));
  }
  return SubgroupRep(h.source(), gens);
}

// Some x with h(x) == y, if one exists.
inline std::optional<Vector> solve_in_group(const GroupHom& h, const Vector& y) {
  h.target().check(y);
  auto sol = solve_integer(hstack(h.matrix(), detail::relation_columns(h.target())), y);
  if (!sol) return std::nullopt;
  Vector x(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(h.source().dim()));
  return h.source().reduce(x);
}

inline bool is_surjective(const GroupHom& h) { return image(h) == SubgroupRep::whole(h.target()); }
inline bool is_injective(const GroupHom& h) { return kernel(h).is_zero(); }
inline bool is_isomorphism(const GroupHom& h) { return is_injective(h) && is_surjective(h); }

inline GroupHom inverse(const GroupHom& h) {
  if (!is_isomorphism(h)) throw HypothesisError("isomorphism", "homomorphism is not bijective");
  IntMatrix m(h.source().dim(), h.target().dim());
  for (std::size_t j = 0; j < h.target().dim(); ++j) m.set_col(j, *solve_in_group(h, h.target().generator(j)));
  return GroupHom(h.target(), h.source(), m);
}

struct Quotient {
  AbGroup group;
  GroupHom projection;
};

inline Quotient quotient_with_projection(const SubgroupRep& s) {
  QuotientPresentation q = present_quotient(s.ambient().dim(), s.lattice_basis());
  return {q.group, GroupHom(s.ambient(), q.group, q.projection)};
}

// True iff the quotient by s is free, i.e. s contains the torsion and is a direct summand.
inline bool summand_test(const SubgroupRep& s) { return quotient_with_projection(s).group.is_free(); }

// Some C with ambient = s (+) C, or nullopt if s is not a direct summand.
inline std::optional<SubgroupRep> try_direct_complement(const SubgroupRep& s) {
  const AbGroup& g = s.ambient();
  Quotient q = quotient_with_projection(s);
  std::vector<Vector> sgens = s.generators();
  std::vector<Vector> lifts;
  for (std::size_t j = 0; j < q.group.dim(); ++j) {
    Vector x = *solve_in_group(q.projection, q.group.generator(j));
    Int d = q.group.order(j);
    if (d != 0 && !g.is_zero(scale(d, x))) {
      // Need b in s with d * (x + b) == 0.
      IntMatrix m(g.dim(), sgens.size());
      for (std::size_t i = 0; i < sgens.size(); ++i) m.set_col(i, scale(d, sgens[i]));
      GroupHom mult(AbGroup::free(sgens.size()), g, m);
      auto c = solve_in_group(mult, g.reduce(scale(-d, x)));
      if (!c) return std::nullopt;
      for (std::size_t i = 0; i < sgens.size(); ++i) x = add(x, scale((*c)[i], sgens[i]));
    }
    lifts.push_back(g.reduce(x));
  }
  return SubgroupRep(g, lifts);
}

inline bool is_direct_summand(const SubgroupRep& s) { return try_direct_complement(s).has_value(); }

inline SubgroupRep direct_complement(const SubgroupRep& s) {
  auto c = try_direct_complement(s);
  if (!c) throw HypothesisError("direct summand", "subgroup is not a direct summand");
  return *c;
}

// Direct sum of two groups, renormalised to invariant-factor form.
struct GroupSum {
  AbGroup group;
  IntMatrix embed1, embed2;      // A -> S, B -> S
  IntMatrix project1, project2;  // S -> A, S -> B
};

inline GroupSum sum_groups(const AbGroup& a, const AbGroup& b) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na + nb;
  // Preferred layout: free(a), free(b), then torsion coordinates stably sorted by order.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < a.free_rank(); ++i) order.push_back(i);
  for (std::size_t i = 0; i < b.free_rank(); ++i) order.push_back(na + i);
  std::vector<std::pair<Int, std::size_t>> tors;
  for (std::size_t i = a.free_rank(); i < na; ++i) tors.emplace_back(a.order(i), i);
  for (std::size_t i = b.free_rank(); i < nb; ++i) tors.emplace_back(b.order(i), na + i);
  std::stable_sort(tors.begin(), tors.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  bool chain = true;
  for (std::size_t i = 1; i < tors.size(); ++i)
    if (tors[i].first % tors[i - 1].first != 0) chain = false;
  IntMatrix proj, sec;
  AbGroup s;
  if (chain) {
    std::vector<Int> factors;
    for (const auto& t : tors) {
      order.push_back(t.second);
      factors.push_back(t.first);
    }
    s = AbGroup(a.free_rank() + b.free_rank(), factors);
    proj = IntMatrix::identity(n).select_rows(order);
    sec = proj.transpose();
  } else {
    IntMatrix rel = block_diagonal(a.relation_rows(), b.relation_rows());
    QuotientPresentation q = present_quotient(n, rel);
    s = q.group;
    proj = q.projection;
    sec = q.section;
  }
  GroupSum out;
  out.group = s;
  out.embed1 = proj.block(0, 0, s.dim(), na);
  out.embed2 = proj.block(0, na, s.dim(), nb);
  out.project1 = sec.block(0, 0, na, s.dim());
  out.project2 = sec.block(na, 0, nb, s.dim());
  return out;
}

enum class MatchMode { Stable, Strict };

// For surjections f: F -> A, g: G -> A from free groups: free pads F', G' and an isomorphism
// h: F + F' -> G + G' with (g + 0) o h == f + 0.
struct SurjectionMatch {
  AbGroup f_pad;
  AbGroup g_pad;
  GroupHom h;
};

inline SurjectionMatch match_surjections(const GroupHom& f, const GroupHom& g, MatchMode mode) {
  if (f.target() != g.target()) throw DimensionMismatch("surjections have different targets");
  if (!f.source().is_free() || !g.source().is_free())
    throw HypothesisError("free sources", "match_surjections needs free source groups");
  if (!is_surjective(f)) throw HypothesisError("f surjective", "first homomorphism is not onto");
  if (!is_surjective(g)) throw HypothesisError("g surjective", "second homomorphism is not onto");
  const std::size_t p = f.source().dim(), q = g.source().dim();
  const AbGroup& a = f.target();

  if (mode == MatchMode::Strict) {
    if (!a.is_free()) throw HypothesisError("target free", "strict mode needs a free target, got " + a.describe());
    if (p != q) throw HypothesisError("equal ranks", "strict mode needs sources of equal rank");
    IntMatrix c(p, a.dim()), d(q, a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) {
      c.set_col(j, *solve_in_group(f, a.generator(j)));
      d.set_col(j, *solve_in_group(g, a.generator(j)));
    }
    IntMatrix kf = IntMatrix::from_columns(free_basis(kernel(f)), p);
    IntMatrix kg = IntMatrix::from_columns(free_basis(kernel(g)), q);
    IntMatrix src = hstack(kf, c), dst = hstack(kg, d);
    IntMatrix h = dst * unimodular_inverse(src);
    return {AbGroup::free(0), AbGroup::free(0), GroupHom(f.source(), g.source(), h)};
  }

  IntMatrix fbar(q, p);
  for (std::size_t i = 0; i < p; ++i) fbar.set_col(i, *solve_in_group(g, f.apply(f.source().generator(i))));
  std::vector<Vector> kg = free_basis(kernel(g));
  const std::size_t k0 = kg.size();
  IntMatrix f1 = hstack(fbar, kg.empty() ? IntMatrix(q, 0) : IntMatrix::from_columns(kg, q));
  IntMatrix c(p + k0, q);
  for (std::size_t j = 0; j < q; ++j) {
    auto x = solve_integer(f1, unit_vector(q, j));
    if (!x) throw Error("internal: lifted map is not onto");
    c.set_col(j, *x);
  }
  // h(x, y) = (f1 x, x + c y) from F1 + G to G + F1, F1 = F + Ker g.
  const std::size_t n = p + k0 + q;
  IntMatrix h(n, n);
  h.set_block(0, 0, f1);
  h.set_block(q, 0, IntMatrix::identity(p + k0));
  h.set_block(q, p + k0, c);
  return {AbGroup::free(k0 + q), AbGroup::free(p + k0), GroupHom(AbGroup::free(n), AbGroup::free(n), h)};
}

}  // namespace qform
