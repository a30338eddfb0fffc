#pragma once

#include "qform/fundamental.hpp"
#include "qform/ru.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qform {

// (M; L, V) with L a T-lagrangian and V a free half-rank summand.
struct QuasiFormation {
  EQForm form;
  SubgroupRep L;
  SubgroupRep V;

  friend bool operator==(const QuasiFormation& a, const QuasiFormation& b) {
    return a.form == b.form && a.L == b.L && a.V == b.V;
  }
  friend bool operator!=(const QuasiFormation& a, const QuasiFormation& b) { return !(a == b); }
};

inline std::optional<std::string> check_quasi_formation(const QuasiFormation& q) {
  if (q.L.ambient() != q.form.group() || q.V.ambient() != q.form.group()) return "L or V lives in another group";
  if (!is_nonsingular(q.form)) return "form is singular";
  if (!is_t_lagrangian(q.form, q.L)) return "L is not a T-lagrangian";
  if (!subgroup_classify(q.form, q.V).half_rank_summand) return "V is not a half-rank direct summand";
  if (!intersect(q.V, SubgroupRep::torsion(q.form.group())).is_zero()) return "V is not free";
  return std::nullopt;
}

inline void require_quasi_formation(const QuasiFormation& q) {
  if (auto why = check_quasi_formation(q)) throw ValidationError("invalid quasi-formation: " + *why);
}

inline QuasiFormation qf_direct_sum(const QuasiFormation& a, const QuasiFormation& b) {
  if (a.form.target() != b.form.target()) throw DimensionMismatch("quasi-formations over different target groups");
  FormSum s = sum_forms(a.form, b.form);
  return {s.form, subgroup_sum(s.parts, a.L, b.L), subgroup_sum(s.parts, a.V, b.V)};
}

// H_{2k} with L = {0} x Z^k (the b's) and V = Z^k x {0} (the a's).
inline QuasiFormation standard_hyperbolic(std::size_t k, const AbGroup& q = AbGroup()) {
  EQForm h = hyperbolic(k, q);
  std::vector<Vector> a, b;
  for (std::size_t i = 0; i < k; ++i) {
    a.push_back(unit_vector(2 * k, i));
    b.push_back(unit_vector(2 * k, k + i));
  }
  return {h, SubgroupRep(h.group(), b), SubgroupRep(h.group(), a)};
}

inline bool is_elementary(const QuasiFormation& q) {
  return q.L + q.V == SubgroupRep::whole(q.form.group()) && intersect(q.L, q.V).is_zero();
}

inline bool is_L_element(const QuasiFormation& q) { return is_free_lagrangian(q.form, q.V); }

// mu(V) inside Q.
inline SubgroupRep alpha_invariant(const QuasiFormation& q) {
  std::vector<Vector> gens;
  for (const auto& x : q.V.generators()) gens.push_back(q.form.mu_of(x));
  return SubgroupRep(q.form.target(), gens);
}

// Non-negative generator of the image of lambda on V x V.
inline Int beta_invariant(const QuasiFormation& q) {
  Int g = 0;
  auto gens = q.V.generators();
  for (const auto& x : gens)
    for (const auto& y : gens) g = gcd(g, q.form.pair(x, y));
  return g;
}

// Adds H_2 = (H_2; <b>, <a>) on the right.
struct Stab {};

// iso: current -> result.form + H_2 with L -> result.L + <b> and V -> result.V + <a>.
struct Destab {
  QuasiFormation result;
  FormIso iso;
};

// iso: current -> complement + H_2 with L -> lagrangian + X for X one of <b>, <a>;
// L becomes the preimage of lagrangian + (the other line).
struct FlipL {
  FormIso iso;
  EQForm complement;
  SubgroupRep lagrangian;
};

struct ApplyIso {
  FormIso iso;
};

using Move = std::variant<Stab, Destab, FlipL, ApplyIso>;

struct MoveSequence {
  QuasiFormation start;
  QuasiFormation end;
  std::vector<Move> moves;
};

struct MoveOutcome {
  std::optional<QuasiFormation> result;
  std::string reason;
};

namespace detail {

inline SubgroupRep with_line(const EQForm& m, const SubgroupRep& s, bool b_line) {
  EQForm h = hyperbolic(1, m.target());
  return subgroup_sum(m, s, h, SubgroupRep(h.group(), {unit_vector(2, b_line ? 1 : 0)}));
}

inline MoveOutcome apply_move_unchecked(const QuasiFormation& q, const Move& mv) {
  const AbGroup& target = q.form.target();
  if (std::holds_alternative<Stab>(mv)) return {qf_direct_sum(q, standard_hyperbolic(1, target)), {}};
  if (const ApplyIso* a = std::get_if<ApplyIso>(&mv)) {
    if (a->iso.source() != q.form) return {std::nullopt, "isomorphism does not start at the current form"};
    return {QuasiFormation{a->iso.target(), a->iso.apply(q.L), a->iso.apply(q.V)}, {}};
  }
  if (const Destab* d = std::get_if<Destab>(&mv)) {
    if (d->iso.source() != q.form) return {std::nullopt, "split witness does not start at the current form"};
    if (auto why = check_quasi_formation(d->result)) return {std::nullopt, "destabilized result: " + *why};
    if (d->iso.target() != direct_sum(d->result.form, hyperbolic(1, target)))
      return {std::nullopt, "split witness does not land in result + H_2"};
    if (d->iso.apply(q.L) != with_line(d->result.form, d->result.L, true))
      return {std::nullopt, "split witness does not carry L to result.L + <b>"};
    if (d->iso.apply(q.V) != with_line(d->result.form, d->result.V, false))
      return {std::nullopt, "split witness does not carry V to result.V + <a>"};
    return {d->result, {}};
  }
  const FlipL& f = std::get<FlipL>(mv);
  if (f.iso.source() != q.form) return {std::nullopt, "flip isomorphism does not start at the current form"};
  if (f.iso.target() != direct_sum(f.complement, hyperbolic(1, target)))
    return {std::nullopt, "flip isomorphism does not land in complement + H_2"};
  if (!is_t_lagrangian(f.complement, f.lagrangian)) return {std::nullopt, "flip lagrangian is not a T-lagrangian"};
  SubgroupRep img = f.iso.apply(q.L);
  SubgroupRep flipped;
  if (img == with_line(f.complement, f.lagrangian, true))
    flipped = with_line(f.complement, f.lagrangian, false);
  else if (img == with_line(f.complement, f.lagrangian, false))
    flipped = with_line(f.complement, f.lagrangian, true);
  else
    return {std::nullopt, "I(L) is not of the split shape L' + line"};
  return {QuasiFormation{q.form, f.iso.inverse().apply(flipped), q.V}, {}};
}

}  // namespace detail

inline MoveOutcome apply_move(const QuasiFormation& q, const Move& mv) {
  try {
    return detail::apply_move_unchecked(q, mv);
  } catch (const Error& e) {
    return {std::nullopt, e.what()};
  }
}

struct ReplayResult {
  bool ok = true;
  std::optional<std::size_t> failed_index;
  std::string reason;
  explicit operator bool() const { return ok; }
};

inline ReplayResult replay(const MoveSequence& s) {
  if (auto why = check_quasi_formation(s.start)) return {false, std::nullopt, "start: " + *why};
  QuasiFormation cur = s.start;
  for (std::size_t i = 0; i < s.moves.size(); ++i) {
    MoveOutcome out = apply_move(cur, s.moves[i]);
    if (!out.result) return {false, i, out.reason};
    cur = std::move(*out.result);
  }
  if (cur != s.end) return {false, std::nullopt, "moves do not reach the stated end"};
  return {};
}

// Builds a sequence move by move, checking each one as it is appended.
class MoveBuilder {
 public:
  explicit MoveBuilder(QuasiFormation start) : start_(std::move(start)), current_(start_) {
    require_quasi_formation(start_);
  }

  const QuasiFormation& current() const { return current_; }

  void push(Move mv) {
    MoveOutcome out = apply_move(current_, mv);
    if (!out.result) throw Error("internal: move " + std::to_string(moves_.size()) + " rejected: " + out.reason);
    current_ = std::move(*out.result);
    moves_.push_back(std::move(mv));
  }

  void stab() { push(Stab{}); }
  void apply_iso(const EQForm& target, const IntMatrix& m) { push(ApplyIso{FormIso(current_.form, target, m)}); }

  // V -> g(V) for a generator of RU(current form, current L).
  void apply_generator(const RUGenerator& g) {
    if (auto why = check_generator(current_.form, current_.L, g)) throw Error("internal: " + *why);
    IntMatrix psi = generator_matrix(g);
    apply_iso(current_.form, psi);
    if (const Flip* flip = std::get_if<Flip>(&g)) {
      FormIso to_right = compose(swap_iso(hyperbolic(1, current_.form.target()), flip->complement), flip->iso);
      push(FlipL{to_right, flip->complement, flip->lagrangian});
    }
  }

  // V -> w(V), applying the generators from last to first.
  void apply_word(const RUWord& w) {
    if (w.ambient != current_.form || w.lagrangian != current_.L)
      throw Error("internal: word acts on a different form or lagrangian");
    for (auto it = w.generators.rbegin(); it != w.generators.rend(); ++it) apply_generator(*it);
  }

  MoveSequence finish() const { return {start_, current_, moves_}; }

 private:
  QuasiFormation start_;
  QuasiFormation current_;
  std::vector<Move> moves_;
};

// (M; L, L) with M = L + A, lambda = [[0, I], [I, D]], mu = [0 | I], D_ii = v(q_i).
inline QuasiFormation zero_formation(const AbGroup& q, const GroupHom& v) {
  if (v.source() != q) throw DimensionMismatch("v is not defined on Q");
  const std::size_t k = q.dim();
  IntMatrix lam(2 * k, 2 * k), mu(k, 2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    lam(i, k + i) = lam(k + i, i) = 1;
    lam(k + i, k + i) = v.apply(q.generator(i))[0] == 0 ? 0 : 1;
    mu(i, k + i) = 1;
  }
  AbGroup m = AbGroup::free(2 * k);
  EQForm e(m, lam, GroupHom(m, q, mu), v);
  std::vector<Vector> l;
  for (std::size_t i = 0; i < k; ++i) l.push_back(unit_vector(2 * k, i));
  SubgroupRep ls(m, l);
  return {e, ls, ls};
}

// Quotient by torsion: (M/Tor; image of L, image of V).
inline QuasiFormation bar_reduce(const QuasiFormation& q) {
  const EQForm& e = q.form;
  const std::size_t r = e.rank();
  if (!mu_vanishes_on(e, SubgroupRep::torsion(e.group())))
    throw HypothesisError("mu vanishes on torsion", "mu is nonzero on the torsion subgroup");
  IntMatrix p(r, e.dim());
  for (std::size_t i = 0; i < r; ++i) p(i, i) = 1;
  AbGroup fr = AbGroup::free(r);
  GroupHom pi(e.group(), fr, p);
  EQForm bar(fr, e.lambda_free(), GroupHom(fr, e.target(), e.mu().matrix().block(0, 0, e.target().dim(), r)), e.v());
  return {bar, image(pi, q.L), image(pi, q.V)};
}

// q + (R, 0, 0; R, 0).
inline QuasiFormation unbar(const QuasiFormation& q, const AbGroup& r) {
  if (r.free_rank() != 0) throw ValidationError("R must be a torsion group");
  EQForm t(r, IntMatrix(r.dim(), r.dim()), GroupHom::zero(r, q.form.target()), q.form.v());
  return qf_direct_sum(q, QuasiFormation{t, SubgroupRep::whole(r), SubgroupRep::zero(r)});
}

// I: unbar(bar_reduce(q), Tor M) -> q carrying L-bar + R to L and V-bar + 0 to V.
inline FormIso unbar_isomorphism(const QuasiFormation& q) {
  require_quasi_formation(q);
  const EQForm& e = q.form;
  const std::size_t r = e.rank(), n = e.dim();
  AbGroup tor(0, e.group().torsion());
  QuasiFormation src = unbar(bar_reduce(q), tor);

  std::vector<Vector> w = free_basis(q.V);
  AbGroup fr = AbGroup::free(r);
  std::vector<Vector> pw;
  for (const auto& x : w) pw.push_back(Vector(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(r)));
  std::vector<Vector> c = free_basis(direct_complement(SubgroupRep(fr, pw)));
  std::vector<Vector> ucols = pw, lifts = w;
  for (const auto& x : c) {
    ucols.push_back(x);
    Vector y = x;
    y.resize(n);
    lifts.push_back(y);
  }
  IntMatrix i0 = IntMatrix::from_columns(lifts, n) * unimodular_inverse(IntMatrix::from_columns(ucols, r));
  IntMatrix tmap(n, tor.dim());
  for (std::size_t j = 0; j < tor.dim(); ++j) tmap(r + j, j) = 1;
  GroupSum parts = sum_groups(fr, tor);
  FormIso iso(src.form, e, i0 * parts.project1 + tmap * parts.project2);
  if (iso.apply(src.L) != q.L || iso.apply(src.V) != q.V)
    throw Error("internal: splitting does not carry the quasi-formation back");
  return iso;
}

// Decomposition (M; L, K) = (M'; J, J) + (H; L', K') for an element over free Q.
struct LGroupDecomposition {
  SubgroupRep J, X, M_prime, H, L_prime, K_prime;  // subgroups of M
  QuasiFormation zero_part;                        // (M'; J, J)
  QuasiFormation cancel_part;                      // (H; L', K'), cancelled by the hyperbolic lemma
  FormIso hyperbolic_witness;                      // H -> H_{2m}
  MoveSequence skeleton;                           // q -> zero_part + cancel_part
};

inline LGroupDecomposition l_group_trivialize(const QuasiFormation& q) {
  const EQForm& e = q.form;
  if (!e.target().is_free()) throw HypothesisError("Q free", "target group has torsion " + e.target().describe());
  if (!is_free(e)) throw HypothesisError("free form", "form has torsion");
  require_quasi_formation(q);
  if (!is_free_lagrangian(e, q.L) || !is_free_lagrangian(e, q.V))
    throw HypothesisError("free lagrangians", "both L and K must be free lagrangians");
  auto claim = [](bool ok, const std::string& what) {
    if (!ok) throw Error("claim failed: " + what);
  };

  LGroupDecomposition out;
  const SubgroupRep& l = q.L;
  const SubgroupRep& k = q.V;
  SubgroupRep whole = SubgroupRep::whole(e.group());
  out.J = intersect(k, l);
  out.X = direct_complement(out.J);
  out.K_prime = intersect(k, out.X);
  out.L_prime = intersect(l, out.X);
  claim(out.J + out.K_prime == k && out.J + out.L_prime == l, "K = J + K' and L = J + L'");
  out.M_prime = out.J + orthogonal_complement(e, out.X);
  out.H = orthogonal_complement(e, out.M_prime);
  claim(out.M_prime + out.H == whole && intersect(out.M_prime, out.H).is_zero(), "M = M' + H");

  Restriction rm = restrict_form(e, out.M_prime);
  Restriction rh = restrict_form(e, out.H);
  auto pull = [](const Restriction& res, const SubgroupRep& s) {
    std::vector<Vector> gens;
    for (const auto& g : s.generators()) {
      auto c = solve_in_group(res.inclusion, g);
      if (!c) throw Error("claim failed: subgroup does not lie in the summand");
      gens.push_back(*c);
    }
    return SubgroupRep(res.form.group(), gens);
  };
  SubgroupRep j_m = pull(rm, out.J);
  SubgroupRep l_h = pull(rh, out.L_prime);
  SubgroupRep k_h = pull(rh, out.K_prime);
  claim(is_nonsingular(rm.form) && is_nonsingular(rh.form), "M' and H nonsingular");
  claim(is_free_lagrangian(rm.form, j_m), "J lagrangian in M'");
  claim(is_free_lagrangian(rh.form, l_h) && is_free_lagrangian(rh.form, k_h), "L', K' lagrangians in H");
  claim(rh.form.mu().matrix().is_zero(), "mu vanishes on H");
  HyperbolicCheck hc = is_hyperbolic_with_witness(rh.form, l_h);
  claim(static_cast<bool>(hc), "H hyperbolic (" + hc.reason + ")");
  out.hyperbolic_witness = *hc.iso;

  out.zero_part = {rm.form, j_m, j_m};
  out.cancel_part = {rh.form, l_h, k_h};
  QuasiFormation split = qf_direct_sum(out.zero_part, out.cancel_part);
  IntMatrix basis = hstack(rm.inclusion.matrix(), rh.inclusion.matrix());
  MoveBuilder b(q);
  b.apply_iso(split.form, unimodular_inverse(basis));
  claim(b.current() == split, "decomposition carries (L, K) to (J + L', J + K')");
  out.skeleton = b.finish();
  return out;
}

// Certificate for (M; K, L) + (M; L, V) ~ (M; K, V), up to the listed zero-class paddings.
struct JacobiWitness {
  std::size_t k = 0;  // stabilization of the fundamental isomorphism
  FormIso phi;        // M + H_{2k} -> M + H_{2k} carrying L~ to K~
  QuasiFormation kl, lv, kv;
  std::vector<QuasiFormation> start_padding;  // sequence starts at kl + lv + start_padding
  std::vector<QuasiFormation> end_padding;    // and ends at kv + end_padding
  MoveSequence sequence;
};

inline JacobiWitness jacobi_witness(const EQForm& m, const SubgroupRep& kk, const SubgroupRep& ll, const SubgroupRep& vv,
                                    std::optional<MatchMode> mode = std::nullopt) {
  if (!is_free(m)) throw HypothesisError("free form", "ambient form has torsion");
  if (!m.v()) throw MissingV("jacobi_witness");
  if (!is_full(m)) throw HypothesisError("full", "ambient form must be full");
  if (!is_geometric(m)) throw HypothesisError("geometric", "ambient form must be geometric");
  if (!is_free_lagrangian(m, kk)) throw HypothesisError("free lagrangian", "K is not a free lagrangian");
  if (!is_free_lagrangian(m, ll)) throw HypothesisError("free lagrangian", "L is not a free lagrangian");
  const AbGroup& q = m.target();
  JacobiWitness out;
  out.kl = {m, kk, ll};
  out.lv = {m, ll, vv};
  out.kv = {m, kk, vv};
  if (auto why = check_quasi_formation(out.lv)) throw HypothesisError("quasi-formation", *why);

  MatchMode md = mode.value_or(q.is_free() ? MatchMode::Strict : MatchMode::Stable);
  StableLagrangianIso s = stable_lagrangian_iso(m, ll, m, kk, md);
  if (s.k != s.l) throw Error("internal: unequal stabilizations for a form against itself");
  const std::size_t k = s.k, n = m.dim(), big = n + 2 * k;
  out.k = k;
  out.phi = s.iso;
  const EQForm& mt = s.iso.source();
  const EQForm nmt = negate(mt);
  SubgroupRep lt = stabilized_lagrangian(m, ll, k);
  SubgroupRep kt = stabilized_lagrangian(m, kk, k);
  std::vector<Vector> a_lines;
  for (std::size_t i = 0; i < k; ++i) a_lines.push_back(unit_vector(2 * k, i));
  EQForm hk = hyperbolic(k, q);
  SubgroupRep vt = subgroup_sum(m, vv, hk, SubgroupRep(hk.group(), a_lines));

  QuasiFormation pad{nmt, kt, kt};
  out.start_padding = {pad};
  MoveBuilder b(qf_direct_sum(qf_direct_sum(out.kl, out.lv), pad));

  // Stabilize both summands and gather each into M + H_{2k}.
  for (std::size_t i = 0; i < 2 * k; ++i) b.stab();
  EQForm three = direct_sum(direct_sum(mt, mt), nmt);
  {
    std::vector<std::size_t> to(b.current().form.dim());
    for (std::size_t i = 0; i < n; ++i) to[i] = i;
    for (std::size_t i = 0; i < n; ++i) to[n + i] = big + i;
    for (std::size_t t = 0; t < big; ++t) to[2 * n + t] = 2 * big + t;
    for (std::size_t j = 0; j < 2 * k; ++j) {
      std::size_t base = j < k ? n + j : big + n + (j - k);
      to[2 * n + big + 2 * j] = base;
      to[2 * n + big + 2 * j + 1] = base + k;
    }
    b.apply_iso(three, permutation_matrix(to));
  }

  // (M~; K~, L + Z^k x 0) ~ (M~; K~, L~) by the hyperbolic flips.
  EQForm rest = direct_sum(mt, nmt);
  SubgroupRep rest_l = subgroup_sum(mt, lt, nmt, kt);
  for (std::size_t i = 0; i < k; ++i)
    b.apply_generator(lift_right(hyperbolic_factor_flip(m, kk, k, i), mt, rest, rest_l));

  // Second summand through phi: (M~; L~, V~) -> (M~; K~, phi(V~)).
  b.apply_iso(three, block_diagonal(block_diagonal(IntMatrix::identity(big), s.iso.matrix()), IntMatrix::identity(big)));

  // phi + phi^{-1} + id is a word in RU(M~ + M~ + (-M~), K~ + K~ + K~).
  RUWallWitness wall = ru_wall_witness(mt, kt, FormIso(mt, mt, s.iso.matrix()));
  b.apply_word(wall.word);

  // (M~; K~, K~) + (M~; K~, V~) + pad -> (M~; K~, V~) + (M~; K~, K~) + pad.
  {
    std::vector<std::size_t> to(3 * big);
    for (std::size_t i = 0; i < 3 * big; ++i) to[i] = i < big ? i + big : (i < 2 * big ? i - big : i);
    b.apply_iso(three, permutation_matrix(to));
  }

  // Move the H_{2k} of the first summand to the end as k copies of H_2, then destabilize.
  QuasiFormation mkk{mt, kt, kt};
  out.end_padding = {mkk, pad};
  QuasiFormation base = qf_direct_sum(qf_direct_sum(out.kv, mkk), pad);
  if (k > 0) {
    std::vector<QuasiFormation> chain = {base};
    for (std::size_t j = 0; j < k; ++j) chain.push_back(qf_direct_sum(chain.back(), standard_hyperbolic(1, q)));
    std::vector<std::size_t> to(3 * big);
    const std::size_t tail = n + 2 * big;
    for (std::size_t i = 0; i < n; ++i) to[i] = i;
    for (std::size_t j = 0; j < k; ++j) {
      to[n + j] = tail + 2 * j;
      to[n + k + j] = tail + 2 * j + 1;
    }
    for (std::size_t t = 0; t < 2 * big; ++t) to[big + t] = n + t;
    b.apply_iso(chain.back().form, permutation_matrix(to));
    for (std::size_t j = k; j-- > 0;) {
      const QuasiFormation& res = chain[j];
      EQForm split = direct_sum(res.form, hyperbolic(1, q));
      b.push(Destab{res, FormIso(b.current().form, split, IntMatrix::identity(split.dim()))});
    }
  }
  if (b.current() != base) throw Error("internal: Jacobi sequence does not end at (M; K, V) + padding");
  out.sequence = b.finish();
  return out;
}

}  // namespace qform
