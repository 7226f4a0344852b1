#ifndef LSTS_TYPES_HPP
#define LSTS_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace lsts {

using Integer = std::int64_t;
using Complex = std::complex<double>;

template <int D>
using IntVector = Eigen::Matrix<Integer, D, 1>;
template <int D>
using IntMatrix = Eigen::Matrix<Integer, D, D>;
template <int D>
using RealVector = Eigen::Matrix<double, D, 1>;
template <int D>
using RealMatrix = Eigen::Matrix<double, D, D>;

template <typename Derived>
std::string to_string(const Eigen::MatrixBase<Derived>& v) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v(i);
  }
  os << ')';
  return os.str();
}

namespace detail {

/// Floor modulus: result in [0, n).
inline Integer floor_mod(Integer a, Integer n) {
  Integer r = a % n;
  return r < 0 ? r + n : r;
}

/// Exact determinant of a square integer matrix (row-major, n x n) by
/// fraction-free Bareiss elimination.
inline Integer bareiss_determinant(std::vector<Integer> a, int n) {
  if (n == 0) return 1;
  Integer sign = 1;
  __int128 prev = 1;
  auto at = [&](int i, int j) -> Integer& { return a[static_cast<std::size_t>(i * n + j)]; };
  for (int k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i) {
        if (at(i, k) != 0) {
          swap = i;
          break;
        }
      }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(swap, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        __int128 v = static_cast<__int128>(at(i, j)) * at(k, k) -
                     static_cast<__int128>(at(i, k)) * at(k, j);
        at(i, j) = static_cast<Integer>(v / prev);
      }
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

}  // namespace detail

template <int D>
Integer determinant(const IntMatrix<D>& a) {
  std::vector<Integer> flat(D * D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) flat[static_cast<std::size_t>(i * D + j)] = a(i, j);
  return detail::bareiss_determinant(std::move(flat), D);
}

/// Classical adjugate, adj(A) A = det(A) I.
template <int D>
IntMatrix<D> adjugate(const IntMatrix<D>& a) {
  IntMatrix<D> adj;
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      std::vector<Integer> minor;
      minor.reserve((D - 1) * (D - 1));
      for (int r = 0; r < D; ++r) {
        if (r == i) continue;
        for (int c = 0; c < D; ++c) {
          if (c == j) continue;
          minor.push_back(a(r, c));
        }
      }
      const Integer cof = detail::bareiss_determinant(std::move(minor), D - 1);
      adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
    }
  }
  return adj;
}

}  // namespace lsts

#endif  // LSTS_TYPES_HPP
