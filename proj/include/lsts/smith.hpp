#ifndef LSTS_SMITH_HPP
#define LSTS_SMITH_HPP

#include "lsts/errors.hpp"
#include "lsts/types.hpp"

#include <cstdlib>
#include <utility>

namespace lsts {

/**
 * Smith normal form M = S * diag(divisors) * T with S, T unimodular and
 * divisors[0] | divisors[1] | ... , all positive.
 *
 * The inverses of S and T are kept alongside since both are needed to map
 * pattern points and frequencies onto cyclic grid coordinates.
 */
template <int D>
struct SmithDecomposition {
  IntMatrix<D> left;
  IntVector<D> divisors;
  IntMatrix<D> right;
  IntMatrix<D> left_inverse;
  IntMatrix<D> right_inverse;

  IntMatrix<D> diagonal() const { return divisors.asDiagonal(); }
};

template <int D>
SmithDecomposition<D> smith_normal_form(const IntMatrix<D>& m) {
  if (determinant<D>(m) == 0) throw ZeroDeterminant();

  // Invariant: a = rows * m * cols.
  IntMatrix<D> a = m;
  IntMatrix<D> rows = IntMatrix<D>::Identity();
  IntMatrix<D> cols = IntMatrix<D>::Identity();

  for (int t = 0; t < D; ++t) {
    while (true) {
      int pi = -1, pj = -1;
      for (int i = t; i < D; ++i) {
        for (int j = t; j < D; ++j) {
          if (a(i, j) != 0 && (pi < 0 || std::llabs(a(i, j)) < std::llabs(a(pi, pj)))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi < 0) throw ZeroDeterminant();
      a.row(t).swap(a.row(pi));
      rows.row(t).swap(rows.row(pi));
      a.col(t).swap(a.col(pj));
      cols.col(t).swap(cols.col(pj));

      bool clean = true;
      for (int i = t + 1; i < D; ++i) {
        const Integer q = a(i, t) / a(t, t);
        if (q != 0) {
          a.row(i) -= q * a.row(t);
          rows.row(i) -= q * rows.row(t);
        }
        if (a(i, t) != 0) clean = false;
      }
      for (int j = t + 1; j < D; ++j) {
        const Integer q = a(t, j) / a(t, t);
        if (q != 0) {
          a.col(j) -= q * a.col(t);
          cols.col(j) -= q * cols.col(t);
        }
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      int bad = -1;
      for (int i = t + 1; i < D && bad < 0; ++i)
        for (int j = t + 1; j < D; ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad >= 0) {
        a.row(t) += a.row(bad);
        rows.row(t) += rows.row(bad);
        continue;
      }
      break;
    }
    if (a(t, t) < 0) {
      a.row(t) *= -1;
      rows.row(t) *= -1;
    }
  }

  SmithDecomposition<D> out;
  out.divisors = a.diagonal();
  out.left_inverse = rows;
  out.right_inverse = cols;
  out.left = adjugate<D>(rows) * determinant<D>(rows);
  out.right = adjugate<D>(cols) * determinant<D>(cols);
  return out;
}

}  // namespace lsts

#endif  // LSTS_SMITH_HPP
