#pragma once

// Bounded brute-force searches used as independent checks.

#include "qform/stableclass.hpp"

#include <cstdlib>
#include <functional>
#include <set>

namespace qform {

struct SearchBudget {
  long entry_bound = 2;
  std::size_t max_stab = 1;
  std::size_t node_limit = 2'000'000;
};

// Default budget with QFORM_NODE_LIMIT applied when set.
inline SearchBudget default_budget() {
  SearchBudget b;
  if (const char* s = std::getenv("QFORM_NODE_LIMIT")) {
    char* end = nullptr;
    unsigned long long n = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0') b.node_limit = static_cast<std::size_t>(n);
  }
  return b;
}

namespace detail {

class NodeCounter {
 public:
  explicit NodeCounter(std::size_t limit) : limit_(limit) {}
  void tick() {
    if (++count_ > limit_) throw BudgetExhausted("node limit " + std::to_string(limit_) + " exceeded");
  }
  std::size_t count() const { return count_; }

 private:
  std::size_t limit_;
  std::size_t count_ = 0;
};

// Entries ordered 0, 1, -1, 2, -2, ...
inline std::vector<Int> entry_order(long bound) {
  std::vector<Int> out{0};
  for (long k = 1; k <= bound; ++k) {
    out.push_back(k);
    out.push_back(-k);
  }
  return out;
}

// All vectors of length n with entries within bound, in lexicographic entry order.
inline std::vector<Vector> box_vectors(std::size_t n, long bound) {
  std::vector<Int> order = entry_order(bound);
  std::vector<Vector> out;
  Vector cur(n);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (const Int& x : order) {
      cur[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

inline bool is_primitive(const Vector& x) {
  Int g = 0;
  for (const Int& c : x) g = gcd(g, c);
  return g == 1;
}

inline void require_free_form(const EQForm& e, const char* who) {
  if (!is_free(e)) throw HypothesisError("free", std::string(who) + " needs a free form");
}

}  // namespace detail

// Free lagrangians whose Hermite generator rows lie within the entry bound, in canonical order.
inline std::vector<SubgroupRep> enumerate_lagrangians(const EQForm& e, const SearchBudget& budget = default_budget()) {
  detail::require_free_form(e, "enumerate_lagrangians");
  if (!is_nonsingular(e)) throw HypothesisError("nonsingular", "enumerate_lagrangians needs a nonsingular form");
  const std::size_t n = e.dim(), k = n / 2;
  std::vector<SubgroupRep> out;
  if (n % 2 != 0) return out;
  std::vector<Vector> cand;
  for (const Vector& x : detail::box_vectors(n, budget.entry_bound)) {
    auto nz = std::find_if(x.begin(), x.end(), [](const Int& c) { return c != 0; });
    if (nz == x.end() || *nz < 0) continue;
    if (e.pair(x, x) == 0 && e.target().is_zero(e.mu_of(x))) cand.push_back(x);
  }
  detail::NodeCounter nodes(budget.node_limit);
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    nodes.tick();
    if (chosen.size() == k) {
      std::vector<Vector> gens;
      for (std::size_t i : chosen) gens.push_back(cand[i]);
      SubgroupRep s(e.group(), gens);
      std::vector<Vector> rows = s.lattice_basis().row_list();
      std::sort(rows.begin(), rows.end());
      std::sort(gens.begin(), gens.end());
      if (rows != gens) return;  // only the Hermite rows themselves
      if (is_free_lagrangian(e, s)) out.push_back(s);
      return;
    }
    for (std::size_t i = start; i < cand.size(); ++i) {
      bool ok = true;
      for (std::size_t j : chosen) ok = ok && e.pair(cand[i], cand[j]) == 0;
      if (!ok) continue;
      chosen.push_back(i);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(), [](const SubgroupRep& a, const SubgroupRep& b) {
    return a.lattice_basis().row_list() < b.lattice_basis().row_list();
  });
  return out;
}

enum class SearchStatus { Found, NoneWithinBound, ExhaustivelyNone };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::NoneWithinBound: return "none-within-bound";
    case SearchStatus::ExhaustivelyNone: return "exhaustively-none";
  }
  return "";
}

struct IsoSearchResult {
  SearchStatus status = SearchStatus::NoneWithinBound;
  std::optional<FormIso> iso;
  std::size_t nodes = 0;
};

namespace detail {

inline bool is_standard_hyperbolic_plane(const EQForm& e) {
  return e.dim() == 2 && e.lambda() == IntMatrix{{0, 1}, {1, 0}};
}

// Column-by-column backtracking over isomorphisms s -> t with entries within bound.
// visit returns true to stop the search.
inline std::size_t backtrack_isomorphisms(const EQForm& s, const EQForm& t, const SearchBudget& budget,
                                          const std::function<bool(const IntMatrix&)>& visit) {
  require_free_form(s, "isomorphism search");
  require_free_form(t, "isomorphism search");
  if (s.dim() != t.dim()) throw DimensionMismatch("isomorphism search needs equal ranks");
  if (s.target() != t.target()) throw DimensionMismatch("forms take values in different targets");
  const std::size_t n = s.dim();
  std::vector<Vector> box = box_vectors(n, budget.entry_bound);
  // Per-column candidates: primitive, correct norm and mu.
  std::vector<std::vector<const Vector*>> cand(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector muj = s.mu_of(s.group().generator(j));
    for (const Vector& x : box)
      if (is_primitive(x) && t.pair(x, x) == s.lambda()(j, j) && t.target().equal(t.mu_of(x), muj))
        cand[j].push_back(&x);
  }
  NodeCounter nodes(budget.node_limit);
  std::vector<const Vector*> cols(n);
  // The identity is tried first so that trivial witnesses come out identity-shaped.
  const IntMatrix id = IntMatrix::identity(n);
  bool stop = !FormIso::check(s, t, id) && visit(id);
  if (stop) return 0;
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == n) {
      std::vector<Vector> c;
      for (const Vector* p : cols) c.push_back(*p);
      IntMatrix m = IntMatrix::from_columns(c, n);
      Int d = m.determinant();
      if ((d == 1 || d == -1) && m != id) stop = visit(m);
      return;
    }
    for (const Vector* x : cand[j]) {
      nodes.tick();
      bool ok = true;
      for (std::size_t i = 0; i < j && ok; ++i) ok = t.pair(*cols[i], *x) == s.lambda()(i, j);
      if (!ok) continue;
      cols[j] = x;
      rec(j + 1);
      if (stop) return;
    }
  };
  if (n > 0) rec(0);
  return nodes.count();
}

}  // namespace detail

inline IsoSearchResult search_isomorphism(const EQForm& s, const EQForm& t, const SearchBudget& budget = default_budget()) {
  IsoSearchResult r;
  r.nodes = detail::backtrack_isomorphisms(s, t, budget, [&](const IntMatrix& m) {
    if (FormIso::check(s, t, m)) return false;
    r.iso = FormIso(s, t, m);
    return true;
  });
  if (r.iso) {
    r.status = SearchStatus::Found;
  } else if (budget.entry_bound >= 1 && detail::is_standard_hyperbolic_plane(s) && detail::is_standard_hyperbolic_plane(t)) {
    // Any isometry permutes the primitive isotropic vectors +-e1, +-e2.
    r.status = SearchStatus::ExhaustivelyNone;
  }
  return r;
}

// All isomorphisms s -> t with entries within the bound, in search order.
inline std::vector<FormIso> enumerate_isomorphisms(const EQForm& s, const EQForm& t,
                                                   const SearchBudget& budget = default_budget()) {
  std::vector<FormIso> out;
  detail::backtrack_isomorphisms(s, t, budget, [&](const IntMatrix& m) {
    if (!FormIso::check(s, t, m)) out.emplace_back(s, t, m);
    return false;
  });
  return out;
}

struct StableIsoWitness {
  std::size_t k = 0;  // copies of the hyperbolic plane added to the source
  std::size_t l = 0;  // copies added to the target
  FormIso iso;
};

struct StableSearchResult {
  SearchStatus status = SearchStatus::NoneWithinBound;
  std::optional<StableIsoWitness> witness;
};

namespace detail {

template <class Stabilize, class Accept>
StableSearchResult stable_search(std::size_t rs, std::size_t rt, const SearchBudget& budget, Stabilize stabilize,
                                 Accept accept) {
  StableSearchResult r;
  for (std::size_t total = 0; total <= 2 * budget.max_stab; ++total)
    for (std::size_t k = 0; k <= std::min(total, budget.max_stab); ++k) {
      std::size_t l = total - k;
      if (l > budget.max_stab || rs + 2 * k != rt + 2 * l) continue;
      auto [s, t] = stabilize(k, l);
      std::optional<FormIso> hit;
      backtrack_isomorphisms(s, t, budget, [&](const IntMatrix& m) {
        if (FormIso::check(s, t, m)) return false;
        FormIso f(s, t, m);
        if (!accept(k, l, f)) return false;
        hit = f;
        return true;
      });
      if (hit) {
        r.status = SearchStatus::Found;
        r.witness = StableIsoWitness{k, l, *hit};
        return r;
      }
    }
  return r;
}

inline EQForm stabilize_form(const EQForm& e, std::size_t k) {
  return k == 0 ? e : direct_sum(e, hyperbolic(k, e.target()));
}

inline QuasiFormation stabilize_qf(const QuasiFormation& q, std::size_t k) {
  return k == 0 ? q : qf_direct_sum(q, standard_hyperbolic(k, q.form.target()));
}

}  // namespace detail

// E + H_2^k = E' + H_2^l as forms.
inline StableSearchResult search_stable_isomorphism(const EQForm& s, const EQForm& t,
                                                    const SearchBudget& budget = default_budget()) {
  return detail::stable_search(
      s.rank(), t.rank(), budget,
      [&](std::size_t k, std::size_t l) { return std::make_pair(detail::stabilize_form(s, k), detail::stabilize_form(t, l)); },
      [](std::size_t, std::size_t, const FormIso&) { return true; });
}

// (M; L, V) + H^k = (M'; L', V') + H^l with the isomorphism carrying L to L' and V to V'.
inline StableSearchResult search_stable_isomorphism(const QuasiFormation& s, const QuasiFormation& t,
                                                    const SearchBudget& budget = default_budget()) {
  if (s.form.target() != t.form.target()) throw DimensionMismatch("quasi-formations over different targets");
  return detail::stable_search(
      s.form.rank(), t.form.rank(), budget,
      [&](std::size_t k, std::size_t l) {
        return std::make_pair(detail::stabilize_qf(s, k).form, detail::stabilize_qf(t, l).form);
      },
      [&](std::size_t k, std::size_t l, const FormIso& f) {
        QuasiFormation a = detail::stabilize_qf(s, k), b = detail::stabilize_qf(t, l);
        return f.apply(a.L) == b.L && f.apply(a.V) == b.V;
      });
}

// SI(E_{a,b}) by divisor scan of ab and quotient by the Aut(H_2)-orbits.
inline SIReport brute_si(const Int& a, const Int& b) {
  const Int g = gcd(a, b), n = abs_value(a * b);
  std::vector<IntPair> members;
  if (n == 0) {
    members = {{0, g}, {g, 0}, {0, -g}, {-g, 0}};
  } else {
    for (Int c = 1; c <= n; ++c) {
      if (n % c != 0) continue;
      for (const Int& cc : {c, Int(-c)}) {
        Int d = a * b / cc;
        if (gcd(cc, d) == g) members.push_back({cc, d});
      }
    }
  }
  std::set<IntPair> reps;
  for (const IntPair& m : members) reps.insert(orbit_representative(m));
  SIReport r;
  r.reps.assign(reps.begin(), reps.end());
  std::sort(r.reps.begin(), r.reps.end(), orbit_less);
  for (const auto& x : r.reps) r.forms.push_back(e_ab(x.first, x.second));
  r.size = r.reps.size();
  r.trace.push_back("divisor scan over " + std::to_string(members.size()) + " pairs");
  return r;
}

}  // namespace qform
