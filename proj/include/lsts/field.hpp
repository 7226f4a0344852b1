#ifndef LSTS_FIELD_HPP
#define LSTS_FIELD_HPP

#include "lsts/errors.hpp"
#include "lsts/lattice.hpp"
#include "lsts/tensor.hpp"
#include "lsts/types.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

namespace lsts {

template <int D>
bool same_pattern(const Lattice<D>& a, const Lattice<D>& b) {
  return &a == &b || a.matrix().matrix() == b.matrix().matrix();
}

/**
 * Symmetric tensor field on a pattern, one Mandel vector per point.
 *
 * Values are complex: the Dirichlet generator on even grids is not
 * Hermitian-symmetric on boundary classes, so exact Galerkin projections of
 * real data pick up imaginary parts. Reports use the real part.
 */
template <int D>
class SymField {
 public:
  static constexpr int ns = sym_size<D>;
  using Data = Eigen::Matrix<Complex, Eigen::Dynamic, ns>;
  using Value = SymTensor2<D, Complex>;

  explicit SymField(std::shared_ptr<const Lattice<D>> lattice)
      : lattice_(std::move(lattice)), data_(Data::Zero(static_cast<Eigen::Index>(lattice_->size()), ns)) {}

  static SymField constant(std::shared_ptr<const Lattice<D>> lattice, const Value& v) {
    SymField f(std::move(lattice));
    f.data_.rowwise() = v.transpose();
    return f;
  }

  const Lattice<D>& lattice() const { return *lattice_; }
  const std::shared_ptr<const Lattice<D>>& lattice_ptr() const { return lattice_; }
  std::size_t size() const { return static_cast<std::size_t>(data_.rows()); }

  Data& data() { return data_; }
  const Data& data() const { return data_; }

  Value at(std::size_t i) const { return data_.row(static_cast<Eigen::Index>(i)).transpose(); }
  void set(std::size_t i, const Value& v) { data_.row(static_cast<Eigen::Index>(i)) = v.transpose(); }

  /// Discrete L2 norm sqrt((1/m) sum_y |E_y|^2).
  double norm() const { return std::sqrt(data_.squaredNorm() / double(size())); }
  double imaginary_norm() const {
    return std::sqrt(data_.imag().squaredNorm() / double(size()));
  }
  /// (1/m) sum_y conj(a_y) . b_y
  Complex inner(const SymField& other) const {
    check(other);
    Complex s = 0.0;
    for (int a = 0; a < ns; ++a) s += data_.col(a).dot(other.data_.col(a));
    return s / double(size());
  }

  void check(const SymField& other) const {
    if (!same_pattern(*lattice_, *other.lattice_) || size() != other.size())
      throw ShapeMismatch("fields live on different patterns");
  }

  SymField& operator+=(const SymField& o) { check(o); data_ += o.data_; return *this; }
  SymField& operator-=(const SymField& o) { check(o); data_ -= o.data_; return *this; }
  SymField& operator*=(Complex s) { data_ *= s; return *this; }
  friend SymField operator+(SymField a, const SymField& b) { return a += b; }
  friend SymField operator-(SymField a, const SymField& b) { return a -= b; }
  friend SymField operator*(Complex s, SymField a) { return a *= s; }

  /// Adds the constant tensor v at every point.
  SymField& add_constant(const Value& v) {
    data_.rowwise() += v.transpose();
    return *this;
  }

 private:
  std::shared_ptr<const Lattice<D>> lattice_;
  Data data_;
};

/// Pointwise stiffness on a pattern.
template <int D>
class StiffnessField {
 public:
  explicit StiffnessField(std::shared_ptr<const Lattice<D>> lattice)
      : lattice_(std::move(lattice)), values_(lattice_->size(), SymTensor4<D>::Zero()) {}

  static StiffnessField homogeneous(std::shared_ptr<const Lattice<D>> lattice,
                                    const SymTensor4<D>& c) {
    StiffnessField f(std::move(lattice));
    std::fill(f.values_.begin(), f.values_.end(), c);
    return f;
  }

  const Lattice<D>& lattice() const { return *lattice_; }
  const std::shared_ptr<const Lattice<D>>& lattice_ptr() const { return lattice_; }
  std::size_t size() const { return values_.size(); }
  const SymTensor4<D>& operator[](std::size_t i) const { return values_[i]; }
  SymTensor4<D>& operator[](std::size_t i) { return values_[i]; }

  /// Worst-case bounds over all points: (min lower, max upper).
  EllipticityBounds bounds() const {
    EllipticityBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& c : values_) {
      const auto e = ellipticity_bounds<D>(c);
      b.lower = std::min(b.lower, e.lower);
      b.upper = std::max(b.upper, e.upper);
    }
    return b;
  }

  /// C(y) : v(y) at every point.
  SymField<D> apply(const SymField<D>& v) const {
    if (!same_pattern(*lattice_, v.lattice()) || v.size() != size())
      throw ShapeMismatch("stiffness and strain fields live on different patterns");
    SymField<D> out(v.lattice_ptr());
    for (std::size_t i = 0; i < size(); ++i)
      out.set(i, values_[i].template cast<Complex>() * v.at(i));
    return out;
  }

 private:
  std::shared_ptr<const Lattice<D>> lattice_;
  std::vector<SymTensor4<D>> values_;
};

/// Constant stiffness C0 applied to every point of a field.
template <int D>
SymField<D> apply_constant(const SymTensor4<D>& c, const SymField<D>& v) {
  SymField<D> out(v.lattice_ptr());
  out.data() = v.data() * c.transpose().template cast<Complex>();
  return out;
}

}  // namespace lsts

#endif  // LSTS_FIELD_HPP
