#pragma once

#include "qform/matrix.hpp"

#include <optional>

namespace qform {

// U * A * V == D with U, V unimodular and D diagonal, d_1 | d_2 | ... , d_i >= 0.
struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  std::size_t rank = 0;
};

// Pivot: smallest nonzero absolute value, ties broken by row-major position.
inline SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithForm s{IntMatrix::identity(m), a, IntMatrix::identity(n), 0};
  IntMatrix& d = s.D;
  const std::size_t lim = std::min(m, n);
  for (std::size_t t = 0; t < lim; ++t) {
    bool found_pivot = false;
    while (true) {
      std::size_t pi = 0, pj = 0;
      Int best;
      bool have = false;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (d(i, j) == 0) continue;
          Int av = abs_value(d(i, j));
          if (!have || av < best) {
            best = av;
            pi = i;
            pj = j;
            have = true;
          }
        }
      if (!have) break;
      found_pivot = true;
      d.swap_rows(t, pi);
      s.U.swap_rows(t, pi);
      d.swap_cols(t, pj);
      s.V.swap_cols(t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        Int q = d(i, t) / d(t, t);
        d.add_row_multiple(i, t, -q);
        s.U.add_row_multiple(i, t, -q);
        if (d(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        Int q = d(t, j) / d(t, t);
        d.add_col_multiple(j, t, -q);
        s.V.add_col_multiple(j, t, -q);
        if (d(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      bool fixed = false;
      for (std::size_t i = t + 1; i < m && !fixed; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            d.add_row_multiple(t, i, 1);
            s.U.add_row_multiple(t, i, 1);
            fixed = true;
            break;
          }
      if (!fixed) break;
    }
    if (!found_pivot) break;
    if (d(t, t) < 0) {
      d.negate_row(t);
      s.U.negate_row(t);
    }
    s.rank = t + 1;
  }
  return s;
}

// T * A == H, T unimodular; the first `rank` rows of H are the row-style Hermite basis of the
// row lattice of A (pivots positive, entries above a pivot reduced into [0, pivot)); the remaining
// rows of H are zero and the matching rows of T span the left kernel of A.
struct HermiteForm {
  IntMatrix H;
  IntMatrix T;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

inline HermiteForm hermite_rows(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  HermiteForm h{a, IntMatrix::identity(m), 0, {}};
  IntMatrix& H = h.H;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    while (true) {
      std::size_t p = m;
      Int best;
      for (std::size_t i = r; i < m; ++i) {
        if (H(i, c) == 0) continue;
        Int av = abs_value(H(i, c));
        if (p == m || av < best) {
          best = av;
          p = i;
        }
      }
      if (p == m) break;
      H.swap_rows(r, p);
      h.T.swap_rows(r, p);
      bool others = false;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (H(i, c) == 0) continue;
        Int q = H(i, c) / H(r, c);
        H.add_row_multiple(i, r, -q);
        h.T.add_row_multiple(i, r, -q);
        if (H(i, c) != 0) others = true;
      }
      if (others) continue;
      if (H(r, c) < 0) {
        H.negate_row(r);
        h.T.negate_row(r);
      }
      for (std::size_t i = 0; i < r; ++i) {
        Int q = floor_div(H(i, c), H(r, c));
        H.add_row_multiple(i, r, -q);
        h.T.add_row_multiple(i, r, -q);
      }
      h.pivots.push_back(c);
      ++r;
      break;
    }
  }
  h.rank = r;
  return h;
}

// Hermite basis rows of the row lattice of A.
inline IntMatrix hermite_basis(const IntMatrix& a) {
  HermiteForm h = hermite_rows(a);
  return h.H.block(0, 0, h.rank, a.cols());
}

// Rows form a basis of { y : y A = 0 }.
inline IntMatrix left_kernel(const IntMatrix& a) {
  HermiteForm h = hermite_rows(a);
  return hermite_basis(h.T.block(h.rank, 0, a.rows() - h.rank, a.rows()));
}

// Columns form a basis of { x : A x = 0 }.
inline IntMatrix right_kernel(const IntMatrix& a) { return left_kernel(a.transpose()).transpose(); }

// Some integer x with A x == b, if one exists.
inline std::optional<Vector> solve_integer(const IntMatrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw DimensionMismatch("right-hand side length mismatch");
  SmithForm s = smith_normal_form(a);
  Vector c = s.U * b;
  Vector y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (i < s.rank) {
      if (c[i] % s.D(i, i) != 0) return std::nullopt;
      y[i] = c[i] / s.D(i, i);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return s.V * y;
}

inline bool is_unimodular(const IntMatrix& a) {
  if (!a.is_square()) return false;
  Int d = a.determinant();
  return d == 1 || d == -1;
}

inline IntMatrix unimodular_inverse(const IntMatrix& a) {
  if (!is_unimodular(a)) throw ValidationError("matrix is not unimodular");
  // The Hermite form of a unimodular matrix is the identity, so T is the inverse.
  return hermite_rows(a).T;
}

}  // namespace qform
