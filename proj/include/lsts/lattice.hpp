#ifndef LSTS_LATTICE_HPP
#define LSTS_LATTICE_HPP

#include "lsts/errors.hpp"
#include "lsts/smith.hpp"
#include "lsts/types.hpp"

#include <array>
#include <cstdlib>
#include <memory>
#include <vector>

namespace lsts {

/// |det M| computed exactly.
template <int D>
Integer det_abs(const IntMatrix<D>& m) {
  const Integer det = determinant<D>(m);
  if (det == 0) throw ZeroDeterminant();
  return det < 0 ? -det : det;
}

/// A regular integer matrix together with the data derived from it that the
/// rest of the library needs: its transpose, m = |det M| and the adjugate.
template <int D>
class PatternMatrix {
 public:
  explicit PatternMatrix(const IntMatrix<D>& entries)
      : entries_(entries),
        transpose_(entries.transpose()),
        det_(lsts::determinant<D>(entries)),
        adjugate_(lsts::adjugate<D>(entries)) {
    if (det_ == 0) throw ZeroDeterminant();
    size_ = det_ < 0 ? -det_ : det_;
  }

  const IntMatrix<D>& matrix() const { return entries_; }
  const IntMatrix<D>& transpose() const { return transpose_; }
  Integer determinant() const { return det_; }
  /// m = |det M|.
  Integer size() const { return size_; }
  const IntMatrix<D>& adjugate() const { return adjugate_; }

  /// Numerators r of M^{-1} k = r / m.
  IntVector<D> inverse_times(const IntVector<D>& k) const {
    return (det_ < 0 ? -1 : 1) * (adjugate_ * k);
  }
  /// Numerators r of M^{-T} k = r / m.
  IntVector<D> inverse_transpose_times(const IntVector<D>& k) const {
    return (det_ < 0 ? -1 : 1) * (adjugate_.transpose() * k);
  }

 private:
  IntMatrix<D> entries_;
  IntMatrix<D> transpose_;
  Integer det_;
  Integer size_ = 0;
  IntMatrix<D> adjugate_;
};

namespace detail {

/// Reduce numerators r/m componentwise into the symmetric cube [-1/2, 1/2).
template <int D>
IntVector<D> reduce_to_cube(IntVector<D> r, Integer m) {
  for (int i = 0; i < D; ++i) {
    Integer v = floor_mod(r(i), m);
    if (2 * v >= m) v -= m;
    r(i) = v;
  }
  return r;
}

template <int D>
Integer linear_index(const IntVector<D>& coords, const IntVector<D>& dims) {
  Integer idx = 0;
  for (int i = 0; i < D; ++i) idx = idx * dims(i) + floor_mod(coords(i), dims(i));
  return idx;
}

template <int D>
IntVector<D> grid_coords(Integer idx, const IntVector<D>& dims) {
  IntVector<D> c;
  for (int i = D - 1; i >= 0; --i) {
    c(i) = idx % dims(i);
    idx /= dims(i);
  }
  return c;
}

}  // namespace detail

/// h reduced modulo M^T into the generating set: the unique h = M^T y' with
/// y' in [-1/2,1/2)^d and h congruent to k. Exact integer arithmetic.
template <int D>
IntVector<D> reduce_mod(const PatternMatrix<D>& m, const IntVector<D>& k) {
  const IntVector<D> r = detail::reduce_to_cube<D>(m.inverse_transpose_times(k), m.size());
  IntVector<D> h = m.transpose() * r;
  for (int i = 0; i < D; ++i) h(i) /= m.size();
  return h;
}

/**
 * The pattern P(M): representatives y = r/m of M^{-1}Z^d modulo 1 in the
 * symmetric unit cube, ordered row-major by their Smith coordinates.
 */
template <int D>
class Pattern {
 public:
  Pattern(const PatternMatrix<D>& m, const SmithDecomposition<D>& smith)
      : m_(m.size()), dims_(smith.divisors), to_grid_(smith.left_inverse * m.matrix()) {
    numerators_.resize(static_cast<std::size_t>(m_));
    for (Integer idx = 0; idx < m_; ++idx) {
      const IntVector<D> j = detail::grid_coords<D>(idx, dims_);
      numerators_[static_cast<std::size_t>(idx)] =
          detail::reduce_to_cube<D>(m.inverse_times(IntVector<D>(smith.left * j)), m_);
    }
  }

  std::size_t size() const { return numerators_.size(); }
  Integer denominator() const { return m_; }
  const std::vector<IntVector<D>>& numerators() const { return numerators_; }
  const IntVector<D>& numerator(std::size_t i) const { return numerators_[i]; }
  RealVector<D> point(std::size_t i) const {
    return numerators_[i].template cast<double>() / static_cast<double>(m_);
  }

  /// Position of the point y = r/m (any representative modulo 1).
  std::size_t index_of(const IntVector<D>& numerator) const {
    IntVector<D> j = to_grid_ * numerator;
    for (int i = 0; i < D; ++i) j(i) /= m_;
    return static_cast<std::size_t>(detail::linear_index<D>(j, dims_));
  }

  /// Smith grid coordinates of point i.
  IntVector<D> grid_coordinates(std::size_t i) const {
    return detail::grid_coords<D>(static_cast<Integer>(i), dims_);
  }
  /// Index of y_i + y_j (mod 1).
  std::size_t sum_index(std::size_t i, std::size_t j) const {
    return static_cast<std::size_t>(
        detail::linear_index<D>(grid_coordinates(i) + grid_coordinates(j), dims_));
  }
  /// Index of y_i - y_j (mod 1).
  std::size_t difference_index(std::size_t i, std::size_t j) const {
    return static_cast<std::size_t>(
        detail::linear_index<D>(grid_coordinates(i) - grid_coordinates(j), dims_));
  }

 private:
  Integer m_;
  IntVector<D> dims_;
  IntMatrix<D> to_grid_;
  std::vector<IntVector<D>> numerators_;
};

/**
 * The generating set G(M^T): one integer frequency per congruence class
 * modulo M^T, canonical representatives, ordered by Smith coordinates so
 * that it matches the output layout of the pattern FFT.
 */
template <int D>
class GeneratingSet {
 public:
  GeneratingSet(const PatternMatrix<D>& m, const SmithDecomposition<D>& smith)
      : dims_(smith.divisors), to_grid_(smith.right_inverse.transpose()) {
    const Integer size = m.size();
    freqs_.resize(static_cast<std::size_t>(size));
    for (Integer idx = 0; idx < size; ++idx) {
      const IntVector<D> l = detail::grid_coords<D>(idx, dims_);
      freqs_[static_cast<std::size_t>(idx)] =
          reduce_mod<D>(m, IntVector<D>(smith.right.transpose() * l));
    }
  }

  std::size_t size() const { return freqs_.size(); }
  const std::vector<IntVector<D>>& frequencies() const { return freqs_; }
  const IntVector<D>& operator[](std::size_t i) const { return freqs_[i]; }

  /// Class index of an arbitrary integer frequency.
  std::size_t index_of(const IntVector<D>& k) const {
    return static_cast<std::size_t>(detail::linear_index<D>(IntVector<D>(to_grid_ * k), dims_));
  }
  /// Index of the class of -h_i.
  std::size_t negated_index(std::size_t i) const {
    return static_cast<std::size_t>(detail::linear_index<D>(
        IntVector<D>(-detail::grid_coords<D>(static_cast<Integer>(i), dims_)), dims_));
  }

 private:
  IntVector<D> dims_;
  IntMatrix<D> to_grid_;
  std::vector<IntVector<D>> freqs_;
};

/// Pattern matrix, its Smith form, pattern and generating set, built once.
template <int D>
class Lattice {
 public:
  explicit Lattice(const IntMatrix<D>& m)
      : matrix_(m),
        smith_(smith_normal_form<D>(m)),
        pattern_(matrix_, smith_),
        frequencies_(matrix_, smith_) {}

  static std::shared_ptr<const Lattice> make(const IntMatrix<D>& m) {
    return std::make_shared<const Lattice>(m);
  }

  const PatternMatrix<D>& matrix() const { return matrix_; }
  const SmithDecomposition<D>& smith() const { return smith_; }
  const Pattern<D>& pattern() const { return pattern_; }
  const GeneratingSet<D>& frequencies() const { return frequencies_; }
  std::size_t size() const { return static_cast<std::size_t>(matrix_.size()); }

  IntVector<D> reduce(const IntVector<D>& k) const { return reduce_mod<D>(matrix_, k); }
  bool is_reduced(const IntVector<D>& k) const { return reduce(k) == k; }

  /// Numerators of M^{-T} k over m (the "unit cube" coordinates of k).
  IntVector<D> frequency_coordinates(const IntVector<D>& k) const {
    return matrix_.inverse_transpose_times(k);
  }

 private:
  PatternMatrix<D> matrix_;
  SmithDecomposition<D> smith_;
  Pattern<D> pattern_;
  GeneratingSet<D> frequencies_;
};

template <int D>
Pattern<D> pattern_points(const PatternMatrix<D>& m) {
  return Pattern<D>(m, smith_normal_form<D>(m.matrix()));
}

template <int D>
GeneratingSet<D> generating_set(const PatternMatrix<D>& m) {
  return GeneratingSet<D>(m, smith_normal_form<D>(m.matrix()));
}

}  // namespace lsts

#endif  // LSTS_LATTICE_HPP
