#pragma once

#include "qform/lmonoid.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

namespace qform {

// a = abar * g, b = bbar * g, l = a * bbar (sign of ab); abar = bbar = 1 when a = b = 0.
struct GcdProfile {
  Int a, b, g, abar, bbar, l;
};

inline GcdProfile gcd_profile(const Int& a, const Int& b) {
  GcdProfile p{a, b, gcd(a, b), 1, 1, 0};
  if (p.g != 0) {
    p.abar = a / p.g;
    p.bbar = b / p.g;
  }
  p.l = a * p.bbar;
  return p;
}

// Restriction of e to (Ker mu)^perp.
inline EQForm kappa(const EQForm& e) {
  if (!is_nonsingular(e)) throw HypothesisError("nonsingular", "kappa needs a nonsingular form");
  return restrict_form(e, orthogonal_complement(e, kernel(e.mu()))).form;
}

// (0, 0, 0) when a = b = 0, else (Z, 2 abar bbar, 2 lcm).
inline EQForm kappa_formula(const Int& a, const Int& b) {
  AbGroup z = AbGroup::free(1);
  GcdProfile p = gcd_profile(a, b);
  if (p.g == 0) return EQForm(AbGroup(), IntMatrix(0, 0), GroupHom::zero(AbGroup(), z));
  return EQForm(z, IntMatrix{{2 * p.abar * p.bbar}}, GroupHom(z, z, IntMatrix{{2 * p.l}}));
}

inline bool si1_decide(const Int& a, const Int& b, const Int& c, const Int& d) {
  return gcd(a, b) == gcd(c, d) && a * b == c * d;
}

// alpha * abar + beta * bbar = 1 with the least non-negative alpha when bbar != 0.
inline std::pair<Int, Int> canonical_alpha_beta(const GcdProfile& p) {
  if (p.bbar == 0) return {p.abar, 0};  // abar = +-1 here
  Int m = abs_value(p.bbar);
  Int alpha = 0;
  if (m != 1) {
    auto eg = extended_gcd(mod_floor(p.abar, m), m);
    alpha = mod_floor(eg.x, m);
  }
  Int beta = (1 - alpha * p.abar) / p.bbar;
  return {alpha, beta};
}

inline IntMatrix si1_matrix(const GcdProfile& p, const Int& al, const Int& be) {
  const Int& a = p.abar;
  const Int& b = p.bbar;
  return IntMatrix{{be * b * b, al, be * b, -al * b},
                   {al * a * a, be, -be * a, al * a},
                   {-al * be * a * b, al * be, be * be * b, al * al * a},
                   {a * b, -1, a, b}};
}

// E_{l,g} + H_2 -> E_{a,b} + H_2 for a given solution of alpha abar + beta bbar = 1.
inline FormIso si1_witness(const Int& a, const Int& b, const Int& alpha, const Int& beta) {
  GcdProfile p = gcd_profile(a, b);
  if (alpha * p.abar + beta * p.bbar != 1) throw ValidationError("alpha * abar + beta * bbar must equal 1");
  EQForm h = hyperbolic(1, AbGroup::free(1));
  return FormIso(direct_sum(e_ab(p.l, p.g), h), direct_sum(e_ab(a, b), h), si1_matrix(p, alpha, beta));
}

inline FormIso si1_witness(const Int& a, const Int& b) {
  auto [alpha, beta] = canonical_alpha_beta(gcd_profile(a, b));
  return si1_witness(a, b, alpha, beta);
}

// id, sigma, -id, -sigma
inline std::array<IntMatrix, 4> h2_automorphisms() {
  return {IntMatrix{{1, 0}, {0, 1}}, IntMatrix{{0, 1}, {1, 0}}, IntMatrix{{-1, 0}, {0, -1}}, IntMatrix{{0, -1}, {-1, 0}}};
}

// E_{a,b} -> E_{c,d} when (c, d) lies in the Aut(H_2)-orbit of (a, b).
inline std::optional<FormIso> si2_isomorphic(const Int& a, const Int& b, const Int& c, const Int& d) {
  for (const IntMatrix& m : h2_automorphisms())
    if (!FormIso::check(e_ab(a, b), e_ab(c, d), m)) return FormIso(e_ab(a, b), e_ab(c, d), m);
  return std::nullopt;
}

using IntPair = std::pair<Int, Int>;

inline std::array<IntPair, 4> orbit(const IntPair& x) {
  return {x, IntPair{x.second, x.first}, IntPair{-x.first, -x.second}, IntPair{-x.second, -x.first}};
}

// Orbit order: smaller |c|, then smaller |d|, then non-negative c, then non-negative d.
inline bool orbit_less(const IntPair& x, const IntPair& y) {
  auto key = [](const IntPair& p) {
    return std::make_tuple(abs_value(p.first), abs_value(p.second), p.first < 0, p.second < 0);
  };
  return key(x) < key(y);
}

inline IntPair orbit_representative(const IntPair& x) {
  auto o = orbit(x);
  return *std::min_element(o.begin(), o.end(), orbit_less);
}

// Prime powers p^k exactly dividing n > 0.
inline std::vector<Int> prime_power_factors(Int n) {
  std::vector<Int> out;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    Int pk = 1;
    while (n % p == 0) {
      n /= p;
      pk *= p;
    }
    out.push_back(pk);
  }
  if (n > 1) out.push_back(n);
  return out;
}

struct SIReport {
  std::size_t size = 0;
  std::vector<IntPair> reps;       // (c, d) when the class is a family of E_{c,d}
  std::vector<EQForm> forms;       // representatives as forms
  std::vector<std::string> trace;  // reduction steps
  std::optional<IntPair> ab;       // (a, b) read off the hyperbolic basis when rk Q = 1
};

inline SIReport si_enumerate(const Int& a, const Int& b) {
  SIReport r;
  GcdProfile p = gcd_profile(a, b);
  if (a * b == 0 || abs_value(a) == abs_value(b)) {
    r.reps = {orbit_representative({a, b})};
    r.trace.push_back(a * b == 0 ? "ab = 0" : "|a| = |b|");
  } else {
    Int n = abs_value(p.abar * p.bbar);
    std::vector<Int> pk = prime_power_factors(n);
    r.trace.push_back("r = " + std::to_string(pk.size()));
    std::vector<IntPair> found;
    for (std::size_t mask = 0; mask < (std::size_t{1} << pk.size()); ++mask) {
      Int c = 1;
      for (std::size_t i = 0; i < pk.size(); ++i)
        if (mask & (std::size_t{1} << i)) c *= pk[i];
      for (const Int& eps : {Int(1), Int(-1)}) {
        IntPair rep = orbit_representative({eps * c * p.g, p.l / (eps * c)});
        if (std::find(found.begin(), found.end(), rep) == found.end()) found.push_back(rep);
      }
    }
    r.reps = found;
  }
  std::sort(r.reps.begin(), r.reps.end(), orbit_less);
  for (const auto& x : r.reps) r.forms.push_back(e_ab(x.first, x.second));
  r.size = r.reps.size();
  return r;
}

// Closed-form count: 1 if ab = 0 or |a| = |b|, else 2^(r-1).
inline std::size_t si_count_formula(const Int& a, const Int& b) {
  if (a * b == 0 || abs_value(a) == abs_value(b)) return 1;
  GcdProfile p = gcd_profile(a, b);
  return std::size_t{1} << (prime_power_factors(abs_value(p.abar * p.bbar)).size() - 1);
}

// Isotropic basis (x, y) of a rank-2 even form of determinant -1 with lambda(x, y) = 1.
inline std::optional<std::pair<Vector, Vector>> hyperbolic_basis(const IntMatrix& lam) {
  if (lam.rows() != 2 || lam.cols() != 2 || lam.determinant() != -1) return std::nullopt;
  const Int &p = lam(0, 0), &q = lam(0, 1), &r = lam(1, 1);
  if (p % 2 != 0 || r % 2 != 0) return std::nullopt;
  std::vector<Vector> lines;
  auto consider = [&](Vector x) {
    Int g = gcd(x[0], x[1]);
    if (g == 0) return;
    x = {x[0] / g, x[1] / g};
    if (x[0] < 0 || (x[0] == 0 && x[1] < 0)) x = {-x[0], -x[1]};
    if (bilinear(lam, x, x) != 0) return;
    if (std::find(lines.begin(), lines.end(), x) == lines.end()) lines.push_back(x);
  };
  for (const Int s : {Int(1), Int(-1)}) {
    consider({-(q + s), p});
    consider({r, -(q + s)});
  }
  if (lines.size() != 2) return std::nullopt;
  std::sort(lines.begin(), lines.end());
  Vector x = lines[0], y = lines[1];
  Int xy = bilinear(lam, x, y);
  if (abs_value(xy) != 1) return std::nullopt;
  if (xy < 0) y = {-y[0], -y[1]};
  return std::make_pair(x, y);
}

// SI of a rank-2 form over free Q whose reduced lambda is hyperbolic.
inline SIReport si_hyp(const EQForm& e) {
  const AbGroup& q = e.target();
  if (!q.is_free()) throw HypothesisError("Q free", "target group has torsion " + q.describe());
  if (!is_full(e)) throw HypothesisError("full", "mu is not surjective");
  if (e.rank() != 2) throw HypothesisError("rank 2", "form has rank " + std::to_string(e.rank()));
  auto hb = hyperbolic_basis(e.lambda_free());
  if (!hb) throw HypothesisError("hyperbolic", "reduced lambda is not isomorphic to [[0,1],[1,0]]");
  SIReport r;
  AbGroup tor(0, e.group().torsion());
  if (!tor.is_trivial()) r.trace.push_back("torsion " + tor.describe() + " stripped");
  const std::size_t rk = q.free_rank();
  r.trace.push_back("rk Q = " + std::to_string(rk));
  if (rk == 0 || rk == 2) {
    r.trace.push_back(rk == 0 ? "reduces to E_{0,0}" : "mu injective after reduction");
    r.size = 1;
    r.forms = {e};
    return r;
  }
  auto [x, y] = *hb;
  Vector xf = x, yf = y;
  xf.resize(e.dim());
  yf.resize(e.dim());
  IntPair ab{e.mu_of(xf)[0], e.mu_of(yf)[0]};
  // Move the basis so that (a, b) is the orbit representative.
  for (const IntMatrix& m : h2_automorphisms()) {
    Vector img = m * Vector{ab.first, ab.second};
    if (IntPair{img[0], img[1]} == orbit_representative(ab)) {
      ab = {img[0], img[1]};
      break;
    }
  }
  r.ab = ab;
  r.trace.push_back("hyperbolic basis gives (a, b) = (" + ab.first.str() + ", " + ab.second.str() + ")");
  SIReport inner = si_enumerate(ab.first, ab.second);
  r.size = inner.size;
  r.reps = inner.reps;
  for (const auto& t : inner.trace) r.trace.push_back(t);
  for (const auto& cd : r.reps) {
    EQForm ecd(AbGroup::free(2), IntMatrix{{0, 1}, {1, 0}}, GroupHom(AbGroup::free(2), q, IntMatrix{{cd.first, cd.second}}),
               e.v());
    if (tor.is_trivial()) {
      r.forms.push_back(ecd);
    } else {
      r.forms.push_back(direct_sum(ecd, EQForm(tor, IntMatrix(tor.dim(), tor.dim()), GroupHom::zero(tor, q), e.v())));
    }
  }
  return r;
}

// Isomorphism (N, lambda, h o mu) -> N for a representative N of SI(E).
inline FormIso aut_action_check(const EQForm& base, const EQForm& n, const GroupHom& h) {
  si_hyp(base);
  if (h.source() != n.target() || h.target() != n.target() || !is_isomorphism(h))
    throw HypothesisError("automorphism", "h must be an automorphism of Q");
  EQForm twisted(n.group(), n.lambda(), compose(h, n.mu()), n.v());
  const std::size_t r = n.rank(), dim = n.dim();
  std::vector<IntMatrix> candidates = {IntMatrix::identity(dim), -IntMatrix::identity(dim)};
  if (n.target().free_rank() == 2 && r == 2) {
    IntMatrix mu_free = n.mu().matrix().block(0, 0, 2, 2);
    if (is_unimodular(mu_free)) {
      IntMatrix f = IntMatrix::identity(dim);
      f.set_block(0, 0, unimodular_inverse(mu_free) * h.matrix() * mu_free);
      candidates.push_back(f);
    }
  }
  for (const auto& m : candidates)
    if (!FormIso::check(twisted, n, m)) return FormIso(twisted, n, m);
  throw HypothesisError("represents an element", "(N, lambda, h o mu) is not isomorphic to N by the listed maps");
}

struct StableClassCounts {
  std::size_t sst = 0;    // |S^st(M)|
  std::size_t sst_f = 0;  // |S^st(M, f)|
};

inline StableClassCounts stable_class_report(int rkq, const Int& a = 0, const Int& b = 0) {
  if (rkq == 0 || rkq == 2) return {1, 1};
  if (rkq != 1) throw ValidationError("rk Q must be 0, 1 or 2");
  if (gcd(a, b) != 1) throw HypothesisError("full", "gcd(a, b) must be 1 when rk Q = 1");
  if (abs_value(a * b) <= 1) return {1, 1};
  std::size_t r = prime_power_factors(abs_value(a * b)).size();
  std::size_t n = std::size_t{1} << (r - 1);
  return {n, n};
}

}  // namespace qform
