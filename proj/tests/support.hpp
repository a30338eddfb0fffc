#pragma once

// Random instance generators shared by the unit and acceptance suites.

#include "qform/qform.hpp"

#include <random>

namespace qform::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  bool coin() { return uniform(0, 1) == 1; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0, static_cast<long>(n) - 1)); }

 private:
  std::mt19937_64 gen_;
};

inline IntMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c, long bound) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(-bound, bound);
  return m;
}

// Product of random elementary operations and sign changes.
inline IntMatrix random_unimodular(Rng& rng, std::size_t n, int steps = 12, long coeff = 2) {
  IntMatrix m = IntMatrix::identity(n);
  if (n == 0) return m;
  for (int s = 0; s < steps; ++s) {
    std::size_t i = rng.index(n), j = rng.index(n);
    if (n > 1 && i == j) continue;
    if (n == 1 || rng.uniform(0, 5) == 0) {
      m.negate_row(i);
    } else {
      m.add_row_multiple(i, j, rng.uniform(-coeff, coeff));
    }
  }
  return m;
}

// Some element generating set of target group choices used throughout the suites.
inline AbGroup target_by_name(const std::string& name) {
  if (name == "0") return AbGroup();
  if (name == "Z") return AbGroup::free(1);
  if (name == "Z2") return AbGroup::free(2);
  if (name == "Z+Z/2") return AbGroup(1, {2});
  if (name == "Z/2") return AbGroup(0, {2});
  throw std::invalid_argument("unknown target " + name);
}

inline Vector random_element(Rng& rng, const AbGroup& g, long bound) {
  Vector x(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) x[i] = rng.uniform(-bound, bound);
  return g.reduce(x);
}

// Random surjection Z^p -> q (retries until onto).
inline GroupHom random_surjection(Rng& rng, std::size_t p, const AbGroup& q, long bound = 3) {
  for (;;) {
    IntMatrix m(q.dim(), p);
    for (std::size_t j = 0; j < p; ++j) m.set_col(j, random_element(rng, q, bound));
    GroupHom h(AbGroup::free(p), q, m);
    if (is_surjective(h)) return h;
  }
}

inline std::optional<GroupHom> random_v(Rng& rng, const AbGroup& q) {
  std::vector<int> bits;
  for (std::size_t j = 0; j < q.dim(); ++j) {
    // Odd-order generators admit only the zero parity.
    bool allowed = q.order(j) == 0 || q.order(j) % 2 == 0;
    bits.push_back(allowed ? static_cast<int>(rng.uniform(0, 1)) : 0);
  }
  return parity_map(q, bits);
}

struct MetabolicInstance {
  EQForm form;
  SubgroupRep lagrangian;
};

// Full geometric metabolic form of rank 2k over q, built from the block shape
// [[0, A], [A^T, B]] with L = first half, then twisted by a random unimodular change.
inline MetabolicInstance random_metabolic(Rng& rng, std::size_t k, const AbGroup& q, const GroupHom& v,
                                          bool twist = true) {
  for (;;) {
    GroupHom muf = random_surjection(rng, k, q, 3);
    IntMatrix a = random_unimodular(rng, k, 6, 1);
    IntMatrix b(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      int parity = v.apply(muf.matrix().col(i))[0] == 0 ? 0 : 1;
      b(i, i) = 2 * rng.uniform(-1, 1) + parity;
      for (std::size_t j = i + 1; j < k; ++j) b(i, j) = b(j, i) = rng.uniform(-2, 2);
    }
    IntMatrix lam(2 * k, 2 * k);
    lam.set_block(0, k, a);
    lam.set_block(k, 0, a.transpose());
    lam.set_block(k, k, b);
    IntMatrix mu(q.dim(), 2 * k);
    mu.set_block(0, k, muf.matrix());
    EQForm base(AbGroup::free(2 * k), lam, GroupHom(AbGroup::free(2 * k), q, mu), v);
    std::vector<Vector> lg;
    for (std::size_t i = 0; i < k; ++i) lg.push_back(unit_vector(2 * k, i));
    SubgroupRep l(base.group(), lg);
    if (!twist) return {base, l};
    IntMatrix p = random_unimodular(rng, 2 * k, 10, 2);
    // New coordinates y = P^{-1} x: pull back along P.
    EQForm e = pullback(GroupHom(base.group(), base.group(), p), base);
    GroupHom pinv(base.group(), base.group(), unimodular_inverse(p));
    return {e, image(pinv, l)};
  }
}

// Eichler transformation x -> x + l(x,u) w - l(x,w) u - (l(w,w)/2) l(x,u) u for isotropic u,
// w orthogonal to u with l(w,w) even and mu(u) = mu(w) = 0.
inline IntMatrix eichler(const EQForm& e, const Vector& u, const Vector& w) {
  const std::size_t n = e.dim();
  Int half = e.pair(w, w) / 2;
  IntMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector x = unit_vector(n, j);
    Int xu = e.pair(x, u), xw = e.pair(x, w);
    Vector y = add(x, add(scale(xu, w), scale(-xw - half * xu, u)));
    m.set_col(j, y);
  }
  return m;
}

// Random automorphism of a metabolic form fixing mu, as a product of Eichler transformations.
inline IntMatrix random_automorphism(Rng& rng, const EQForm& e, const SubgroupRep& l, int factors = 3) {
  const std::size_t n = e.dim();
  std::vector<Vector> lb = free_basis(l);
  std::vector<Vector> kerb = free_basis(kernel(e.mu()));
  IntMatrix acc = IntMatrix::identity(n);
  int made = 0, tries = 0;
  while (made < factors && tries < 200) {
    ++tries;
    Vector u(n);
    for (const auto& b : lb) u = add(u, scale(rng.uniform(-1, 1), b));
    if (std::all_of(u.begin(), u.end(), [](const Int& x) { return x == 0; })) continue;
    Vector w(n);
    for (const auto& b : kerb) w = add(w, scale(rng.uniform(-1, 1), b));
    // Project w into u-perp by adding a multiple of an element pairing to 1 with u is not
    // always possible; simply reject non-orthogonal or odd choices.
    if (e.pair(u, w) != 0 || e.pair(w, w) % 2 != 0) continue;
    IntMatrix m = eichler(e, u, w);
    if (FormIso::check(e, e, m)) continue;
    acc = m * acc;
    ++made;
  }
  return acc;
}

// Random free lagrangian reached from l by neighbour steps l -> (l meet x-perp) + <x> for
// small isotropic x in Ker mu outside l.
inline SubgroupRep random_lagrangian(Rng& rng, const EQForm& form, const SubgroupRep& lag, int steps = 2) {
  // Search in the block coordinates of a metabolic basis, where small vectors are plentiful.
  MetabolicBasis mb = metabolic_basis(form, lag);
  GroupHom to_form(form.group(), form.group(), mb.basis);
  EQForm e = pullback(to_form, form);
  SubgroupRep l = image(inverse(to_form), lag);
  const std::size_t n = e.dim();
  std::vector<Vector> kerb = free_basis(kernel(e.mu()));
  std::vector<Vector> isotropic;
  const std::size_t r = kerb.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < r; ++i) total *= 5;
  for (std::size_t code = 1; code < total; ++code) {
    Vector x(n);
    std::size_t c = code;
    for (std::size_t i = 0; i < r; ++i, c /= 5) x = add(x, scale(static_cast<long>(c % 5) - 2, kerb[i]));
    if (e.pair(x, x) == 0) isotropic.push_back(x);
  }
  SubgroupRep cur = l;
  for (int s = 0, tries = 0; s < steps && tries < 200 && !isotropic.empty(); ++tries) {
    const Vector& x = isotropic[rng.index(isotropic.size())];
    if (cur.contains(x)) continue;
    SubgroupRep xs(e.group(), {x});
    SubgroupRep next = intersect(cur, orthogonal_complement(e, xs)) + xs;
    if (!is_free_lagrangian(e, next)) continue;
    cur = next;
    ++s;
  }
  return image(to_form, cur);
}

// Random free half-rank direct summand of Z^{2k}.
inline SubgroupRep random_half_summand(Rng& rng, const AbGroup& g) {
  const std::size_t n = g.free_rank();
  IntMatrix p = random_unimodular(rng, n, 10, 2);
  std::vector<Vector> gens;
  for (std::size_t j = 0; j < n / 2; ++j) {
    Vector x = p.col(j);
    x.resize(g.dim());
    gens.push_back(x);
  }
  return SubgroupRep(g, gens);
}

// Quasi-formation over a free metabolic form with a random V.
inline QuasiFormation random_quasi_formation(Rng& rng, std::size_t k, const AbGroup& q, const GroupHom& v) {
  MetabolicInstance inst = random_metabolic(rng, k, q, v);
  return {inst.form, inst.lagrangian, random_half_summand(rng, inst.form.group())};
}

// Torsion-carrying quasi-formation: a free one plus (R, 0, 0; R, 0), twisted by a random
// group automorphism mixing free coordinates into torsion.
inline QuasiFormation random_torsion_quasi_formation(Rng& rng, std::size_t k, const AbGroup& q, const GroupHom& v,
                                                    const std::vector<Int>& torsion) {
  QuasiFormation f = random_quasi_formation(rng, k, q, v);
  const std::size_t r = 2 * k, t = torsion.size();
  AbGroup g(r, torsion);
  IntMatrix lam(r + t, r + t);
  lam.set_block(0, 0, f.form.lambda());
  IntMatrix mu(q.dim(), r + t);
  mu.set_block(0, 0, f.form.mu().matrix());
  EQForm base(g, lam, GroupHom(g, q, mu), v);
  std::vector<Vector> lg, vg;
  auto pad = [&](const Vector& x) {
    Vector y = x;
    y.resize(r + t);
    return y;
  };
  for (const auto& x : f.L.generators()) lg.push_back(pad(x));
  for (std::size_t j = 0; j < t; ++j) lg.push_back(unit_vector(r + t, r + j));
  for (const auto& x : f.V.generators()) vg.push_back(pad(x));
  IntMatrix a = IntMatrix::identity(r + t);
  a.set_block(0, 0, random_unimodular(rng, r, 8, 2));
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < r; ++j) a(r + i, j) = rng.uniform(0, 3);
  GroupHom ah(g, g, a);
  GroupHom ainv = inverse(ah);
  return {pullback(ah, base), image(ainv, SubgroupRep(g, lg)), image(ainv, SubgroupRep(g, vg))};
}

inline Vector element(std::initializer_list<long> xs) {
  Vector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace qform::testing
