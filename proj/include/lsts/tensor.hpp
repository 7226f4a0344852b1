#ifndef LSTS_TENSOR_HPP
#define LSTS_TENSOR_HPP

#include "lsts/errors.hpp"
#include "lsts/types.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace lsts {

/// Number of independent components of a symmetric d x d tensor.
template <int D>
inline constexpr int sym_size = D * (D + 1) / 2;

/// Symmetric second-order tensor in Mandel coordinates.
template <int D, typename Scalar = double>
using SymTensor2 = Eigen::Matrix<Scalar, sym_size<D>, 1>;

/// Symmetric fourth-order tensor (major and minor symmetries) in Mandel coordinates.
template <int D>
using SymTensor4 = Eigen::Matrix<double, sym_size<D>, sym_size<D>>;

/// Index pairs (i, j) of the Mandel components: diagonal entries first, then
/// off-diagonals as 23, 13, 12 (Voigt order).
template <int D>
constexpr std::array<std::pair<int, int>, sym_size<D>> mandel_pairs() {
  if constexpr (D == 1) {
    return {{{0, 0}}};
  } else if constexpr (D == 2) {
    return {{{0, 0}, {1, 1}, {0, 1}}};
  } else {
    static_assert(D == 3, "Mandel ordering is defined for d <= 3");
    return {{{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};
  }
}

/// Position of the component (i, j) in Mandel order.
template <int D>
constexpr int mandel_index(int i, int j) {
  constexpr auto pairs = mandel_pairs<D>();
  for (int a = 0; a < sym_size<D>; ++a) {
    const auto [p, q] = pairs[a];
    if ((p == i && q == j) || (p == j && q == i)) return a;
  }
  return -1;
}

/// Mandel weight of component a: 1 on the diagonal, sqrt(2) off it.
template <int D>
constexpr double mandel_weight(int a) {
  return a < D ? 1.0 : std::numbers::sqrt2;
}

template <int D, typename Scalar>
SymTensor2<D, Scalar> to_mandel(const Eigen::Matrix<Scalar, D, D>& t) {
  constexpr auto pairs = mandel_pairs<D>();
  SymTensor2<D, Scalar> v;
  for (int a = 0; a < sym_size<D>; ++a) {
    const auto [i, j] = pairs[a];
    v(a) = i == j ? t(i, i) : Scalar(std::numbers::sqrt2 * 0.5) * (t(i, j) + t(j, i));
  }
  return v;
}

template <int D, typename Scalar>
Eigen::Matrix<Scalar, D, D> from_mandel(const SymTensor2<D, Scalar>& v) {
  constexpr auto pairs = mandel_pairs<D>();
  Eigen::Matrix<Scalar, D, D> t;
  for (int a = 0; a < sym_size<D>; ++a) {
    const auto [i, j] = pairs[a];
    const Scalar x = v(a) / Scalar(mandel_weight<D>(a));
    t(i, j) = x;
    t(j, i) = x;
  }
  return t;
}

/// Full index form C_ijkl, stored as a flat array with index ((i*D+j)*D+k)*D+l.
template <int D>
using IndexTensor4 = std::array<double, D * D * D * D>;

template <int D>
constexpr std::size_t flat4(int i, int j, int k, int l) {
  return static_cast<std::size_t>(((i * D + j) * D + k) * D + l);
}

template <int D>
IndexTensor4<D> to_index_form(const SymTensor4<D>& c) {
  IndexTensor4<D> out{};
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l) {
          const int a = mandel_index<D>(i, j);
          const int b = mandel_index<D>(k, l);
          out[flat4<D>(i, j, k, l)] = c(a, b) / (mandel_weight<D>(a) * mandel_weight<D>(b));
        }
  return out;
}

template <int D>
SymTensor4<D> from_index_form(const IndexTensor4<D>& c) {
  constexpr auto pairs = mandel_pairs<D>();
  SymTensor4<D> out;
  for (int a = 0; a < sym_size<D>; ++a)
    for (int b = 0; b < sym_size<D>; ++b) {
      const auto [i, j] = pairs[a];
      const auto [k, l] = pairs[b];
      out(a, b) = c[flat4<D>(i, j, k, l)] * mandel_weight<D>(a) * mandel_weight<D>(b);
    }
  return out;
}

/// Isotropic stiffness from Lame parameters: lambda (1 x 1) + 2 mu I.
template <int D>
SymTensor4<D> isotropic_from_lame(double lambda, double mu) {
  SymTensor4<D> c = 2.0 * mu * SymTensor4<D>::Identity();
  c.template topLeftCorner<D, D>().array() += lambda;
  return c;
}

struct Lame {
  double lambda;
  double mu;
};

inline Lame lame_from_young(double young, double poisson) {
  if (!(young > 0.0) || !(poisson > -1.0) || !(poisson < 0.5))
    throw InvalidMaterial("isotropic material needs E > 0 and -1 < nu < 1/2 (got E = " +
                          std::to_string(young) + ", nu = " + std::to_string(poisson) + ")");
  return {young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson)),
          young / (2.0 * (1.0 + poisson))};
}

template <int D>
SymTensor4<D> isotropic_stiffness(double young, double poisson) {
  const Lame l = lame_from_young(young, poisson);
  return isotropic_from_lame<D>(l.lambda, l.mu);
}

/// Lame parameters of the orthogonal projection of C onto the isotropic tensors.
template <int D>
Lame lame_projection(const SymTensor4<D>& c) {
  constexpr int ns = sym_size<D>;
  SymTensor4<D> vol = SymTensor4<D>::Zero();
  vol.template topLeftCorner<D, D>().setConstant(1.0 / D);
  const SymTensor4<D> dev = SymTensor4<D>::Identity() - vol;
  const double a = (c * vol).trace();
  const double b = ns > 1 ? (c * dev).trace() / (ns - 1) : a;
  return {(a - b) / D, 0.5 * b};
}

struct EllipticityBounds {
  double lower;
  double upper;
  bool elliptic() const { return lower > 0.0; }
};

/// Extreme eigenvalues of the Mandel matrix.
template <int D>
EllipticityBounds ellipticity_bounds(const SymTensor4<D>& c) {
  Eigen::SelfAdjointEigenSolver<SymTensor4<D>> es(0.5 * (c + c.transpose()),
                                                  Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

template <int D, typename Scalar>
SymTensor2<D, Scalar> apply(const SymTensor4<D>& c, const SymTensor2<D, Scalar>& e) {
  return c.template cast<Scalar>() * e;
}

template <int D, typename Scalar>
Scalar frobenius(const SymTensor2<D, Scalar>& a, const SymTensor2<D, Scalar>& b) {
  return a.dot(b);
}

/// Runtime-sized variants for data whose dimension is only known at run time.
inline Eigen::VectorXd apply(const Eigen::MatrixXd& c, const Eigen::VectorXd& e) {
  if (c.rows() != c.cols() || c.cols() != e.size())
    throw DimensionMismatch("stiffness is " + std::to_string(c.rows()) + "x" +
                            std::to_string(c.cols()) + ", strain has " +
                            std::to_string(e.size()) + " components");
  return c * e;
}

inline double frobenius(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("tensors have " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()) + " components");
  return a.dot(b);
}

/// Mandel vector from a list of plain tensor components. Accepts either the
/// d(d+1)/2 independent entries in Mandel order but unscaled (11, 22, 12 for
/// d = 2) or all d*d entries in row-major order.
template <int D>
SymTensor2<D> mandel_from_components(const std::vector<double>& values) {
  constexpr int ns = sym_size<D>;
  if (static_cast<int>(values.size()) == ns) {
    SymTensor2<D> v;
    for (int a = 0; a < ns; ++a) v(a) = values[static_cast<std::size_t>(a)] * mandel_weight<D>(a);
    return v;
  }
  if (static_cast<int>(values.size()) == D * D) {
    RealMatrix<D> t;
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) t(i, j) = values[static_cast<std::size_t>(i * D + j)];
    if ((t - t.transpose()).cwiseAbs().maxCoeff() > 0.0)
      throw DimensionMismatch("strain tensor is not symmetric");
    return to_mandel<D, double>(t);
  }
  throw DimensionMismatch("expected " + std::to_string(ns) + " or " + std::to_string(D * D) +
                          " strain components, got " + std::to_string(values.size()));
}

}  // namespace lsts

#endif  // LSTS_TENSOR_HPP
